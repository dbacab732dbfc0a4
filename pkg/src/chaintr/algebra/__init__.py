"""Exact/float/series scalar rings and the univariate calculus built on them."""
from .duals import Dual
from .laurent import LaurentPoly, laurent_arith
from .multipoly import MultiPoly
from .poly import Poly
from .rational import (ClusteredPolesError, RationalFn, local_expand,
                       partial_fractions, recombine, residue)
from .rings import (FloatRing, RationalRing, Ring, RingError, SeriesRing,
                    TruncSeries, parse_ring, ring_tag)
from .roots import IrrationalRootError, MultipleRootError, poly_roots
from .series import INF, LocalSeries, OrderExhausted, series_solve

__all__ = [
    "Dual", "LaurentPoly", "laurent_arith", "MultiPoly", "Poly",
    "ClusteredPolesError", "RationalFn", "local_expand", "partial_fractions",
    "recombine", "residue", "FloatRing", "RationalRing", "Ring", "RingError",
    "SeriesRing", "TruncSeries", "parse_ring", "ring_tag",
    "IrrationalRootError", "MultipleRootError", "poly_roots",
    "INF", "LocalSeries", "OrderExhausted", "series_solve",
]
