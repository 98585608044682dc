"""Independent high-precision oracles (mpmath); never import descm internals here."""
import mpmath as mp

mp.mp.dps = 60


def simple_phi(t):
    t = mp.mpf(t)
    return mp.log1p(mp.exp(mp.sinh(t)))


def general_phi(a, b, c, d):
    a, b, c, d = (mp.mpf(str(v)) for v in (a, b, c, d))

    def phi(t):
        t = mp.mpf(t)
        return mp.log1p(mp.exp(a * mp.exp(b * t) - c * mp.exp(-d * t)))

    return phi


def _central(f, t, h, order):
    if order == 1:
        return (f(t + h) - f(t - h)) / (2 * h)
    if order == 2:
        return (f(t + h) - 2 * f(t) + f(t - h)) / h**2
    return (f(t + 2 * h) - 2 * f(t + h) + 2 * f(t - h) - f(t - 2 * h)) / (2 * h**3)


def richardson_derivative(f, t, order, steps=("1e-4", "1e-5", "1e-6")):
    """Central differences at several steps, Richardson-extrapolated (error O(h^2) -> O(h^4))."""
    t = mp.mpf(t)
    best = None
    for s in steps:
        h = mp.mpf(s)
        coarse = _central(f, t, h, order)
        fine = _central(f, t, h / 2, order)
        best = (4 * fine - coarse) / 3
    return best


def operator_vtilde(phi, V, t, h="1e-5"):
    """-sqrt(phi') d/dt[(1/phi') d/dt sqrt(phi')] + phi'^2 V(phi) by nested central differences."""
    h = mp.mpf(h)
    t = mp.mpf(t)

    def D(f):
        return lambda x: (f(x + h) - f(x - h)) / (2 * h)

    p1 = D(phi)
    sq = lambda x: mp.sqrt(p1(x))
    inner = lambda x: D(sq)(x) / p1(x)
    return -mp.sqrt(p1(t)) * D(inner)(t) + p1(t) ** 2 * V(phi(t))


def bisect_lambert(x, iters=200):
    x = mp.mpf(x)
    lo, hi = mp.mpf(0), max(mp.mpf(1), mp.log(x + 1) + 1)
    for _ in range(iters):
        mid = (lo + hi) / 2
        if mid * mp.exp(mid) > x:
            hi = mid
        else:
            lo = mid
    return lo
