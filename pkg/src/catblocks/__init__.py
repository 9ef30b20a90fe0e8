"""Exact Grothendieck-group checks for two categorifications of the sl_2
action on (C^2)^{tensor n}: translation functors between singular blocks of
sl_n in characteristic p, and Fourier-Mukai kernels on T*Gr(r, n)."""

from __future__ import annotations

__version__ = "0.1.0"
