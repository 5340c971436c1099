"""Lieb-Liniger spectra: Bethe ansatz on the circle, exact diagonalization in traps."""
from .bethe import BetheError, BetheState, bethe_solve, ground_quantum_numbers
from .ed import oscillator_ed, plane_wave_ed
from .spectrum import (
    Branches,
    DegeneracyIndex,
    LLSpectrum,
    Trap,
    degeneracy_index,
    excitation_branches,
    ll_spectrum_periodic,
    ll_spectrum_trapped,
    richardson,
    tg_levels,
)

__all__ = [
    "BetheError", "BetheState", "bethe_solve", "ground_quantum_numbers",
    "oscillator_ed", "plane_wave_ed",
    "Branches", "DegeneracyIndex", "LLSpectrum", "Trap", "degeneracy_index",
    "excitation_branches", "ll_spectrum_periodic", "ll_spectrum_trapped", "richardson",
    "tg_levels",
]
