"""Golden-section search on a bracket, shared by the circle minimizer and the
extremal oracles."""
import math

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_max(f, lo, hi, iters):
    """Maximize a unimodal ``f`` on ``[lo, hi]`` with a fixed number of shrink steps.

    Returns ``(x, f(x))`` for the best point seen, endpoints included.
    """
    a, b = float(lo), float(hi)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    best = max((fc, c), (fd, d))
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
            cand = (fc, c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
            cand = (fd, d)
        if cand[0] > best[0]:
            best = cand
    for x in (lo, hi):
        fx = f(x)
        if fx > best[0]:
            best = (fx, x)
    return best[1], best[0]
