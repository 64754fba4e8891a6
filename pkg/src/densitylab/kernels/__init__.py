"""Kernel backend selection.

The hot loops (sieves, residue enumeration, sliding-window counts) live in a
compiled Cython extension when it is available; a numpy-based pure backend is
the drop-in fallback. Set ``DENSITYLAB_PURE=1`` to force the pure backend,
e.g. for benchmarking the two against each other.
"""

import os

from . import pure

if os.environ.get("DENSITYLAB_PURE") == "1":
    _impl = pure
else:
    try:
        from . import _fast as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = pure

BACKEND = _impl.BACKEND_NAME

sieve_primes = _impl.sieve_primes
least_prime_factor = _impl.least_prime_factor
bigomega_sieve = _impl.bigomega_sieve
quadform_residues_mod = _impl.quadform_residues_mod
quadform_prime_square_count = _impl.quadform_prime_square_count
poly_residues_mod = _impl.poly_residues_mod
window_max_count = _impl.window_max_count
mult_table_count = _impl.mult_table_count
sum_two_squares_indicator = _impl.sum_two_squares_indicator
sumset_cover_missing = _impl.sumset_cover_missing


def available_backends():
    """Name -> module for every importable backend (for tests/benchmarks)."""
    backends = {"pure": pure}
    try:
        from . import _fast

        backends["fast"] = _fast
    except ImportError:
        pass
    return backends
