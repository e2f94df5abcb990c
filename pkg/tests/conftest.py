import os
from fractions import Fraction

from hypothesis import HealthCheck, settings

from holonomia.expr import parse_expr, series_ring, series_truncated
from holonomia.holonomic import de_residual

settings.register_profile("default", max_examples=int(os.environ.get("HYPOTHESIS_EXAMPLES", 40)),
                          deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def annihilates(de, expr, order=30):
    """True when de kills the order-`order` series of expr in every exactly known term."""
    ring = tuple(sorted(set(series_ring(parse_expr(expr), de.var)) | set(de.params)))
    s = series_truncated(expr, order, de.var, ring=ring)
    return all(c == 0 for c in de_residual(de, s, ring))


def frac_list(values):
    return [Fraction(v) for v in values]
