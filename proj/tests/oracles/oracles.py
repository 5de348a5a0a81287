"""Independent reference values frozen into the C++ tests.

Each function recomputes a quantity by brute force (direct summation, dense
quadrature, closed forms) without touching the C++ code. Run with
`python3 tests/oracles/oracles.py` to print every value.
"""
import math

import numpy as np


def h(x):
    return math.exp(-1.0 / x) if x > 0 else 0.0


def transition(t):
    if t <= 0:
        return 1.0
    if t >= 1:
        return 0.0
    a, b = h(1 - t), h(t)
    return a / (a + b)


def plateau(x, a=1.0, b=2.0):
    x = abs(x)
    return 1.0 if x <= a else transition((x - a) / (b - a))


def grid(eps0=0.5, ratio=2 ** -0.5, count=24):
    return np.array([eps0 * ratio**j for j in range(count)])


def fit_slope(eps, vals, tail=0.5):
    n = len(vals)
    m = math.ceil(tail * n - 1e-12)
    x = np.log(eps[n - m:])
    y = np.log(np.maximum(vals[n - m:], 1e-300))
    return float(np.polyfit(x, y, 1)[0])


def weyl_hs_slope(K=256):
    """Slope of ||F(eps Delta)||_HS on the circle: sqrt(sum_n F(eps n^2)^2)."""
    e = grid()
    n = np.arange(-K, K + 1)
    v = [math.sqrt(sum(plateau(x * k * k) ** 2 for k in n)) for x in e]
    return fit_slope(e, np.array(v))


def weyl_hs2_slope(K=512):
    e = grid()
    n = np.arange(-K, K + 1)
    v = [sum(plateau(x * k * k) ** 2 for k in n) for x in e]
    return fit_slope(e, np.array(v))


def delta_sobolev_minus1(K=256):
    n = np.arange(-K, K + 1)
    return math.sqrt(float(np.sum(1.0 / (1.0 + n * n))) / (2 * math.pi))


def graded_norm_diag(K=64, nn=2):
    lam = np.arange(-K, K + 1) ** 2.0
    d = np.exp(-lam)
    total = 0.0
    for p in range(-nn, 2 * nn + 1):
        q = nn - p
        if q < -nn:
            continue
        total += math.sqrt(float(np.sum((1 + lam) ** p * d * d * (1 + lam) ** q)))
    return total


def trace_unit(eps=0.01, K=256):
    return sum(plateau(eps * k * k) for k in range(-K, K + 1))


def delta_net_slopes(K=256, nmax=4):
    """Slopes of ||F(eps Delta) delta||_n, n = 0..nmax."""
    e = grid()
    out = []
    for s in range(nmax + 1):
        v = []
        for x in e:
            acc = 0.0
            for k in range(-K, K + 1):
                f = plateau(x * k * k)
                acc += (1 + k * k) ** s * f * f
            v.append(math.sqrt(acc / (2 * math.pi)))
        out.append(fit_slope(e, np.array(v)))
    return out


def delta_square_slope(K=256):
    """||(F(eps Delta) delta)^2||_0 by sampling the square on a fine grid."""
    e = grid()
    N = 4 * (2 * K + 1)
    x = 2 * math.pi * np.arange(N) / N
    k = np.arange(-K, K + 1)
    v = []
    for ep in e:
        c = np.array([plateau(ep * j * j) for j in k]) / (2 * math.pi)
        f = np.real(np.exp(1j * np.outer(x, k)) @ c)
        v.append(math.sqrt(np.sum(f**4) * 2 * math.pi / N))
    return fit_slope(e, np.array(v))


def trace_action_slope(K=256):
    """Slope of |Tr T_eps| * ||T_eps delta||_0."""
    e = grid()
    v = []
    for x in e:
        tr = sum(plateau(x * k * k) for k in range(-K, K + 1))
        nrm = math.sqrt(sum(plateau(x * k * k) ** 2 for k in range(-K, K + 1)) / (2 * math.pi))
        v.append(tr * nrm)
    return fit_slope(e, np.array(v))


def gaussian_stft_abs(x, xi, a):
    """|V_g f| for g = 2^{1/4} exp(-pi t^2), f = g(. - a)."""
    return math.exp(-math.pi * (x - a) ** 2 / 2) * math.exp(-math.pi * xi * xi / 2)


def heis_dist_example():
    # p - (q^{-1}) p with p = (1,0,0), q = (0,1,0)
    p = (1.0, 0.0, 0.0)
    qi = (0.0, -1.0, 0.0)
    comp = (qi[0] + p[0], qi[1] + p[1], qi[2] + p[2] + 0.5 * (qi[0] * p[1] - p[0] * qi[1]))
    return tuple(p[i] - comp[i] for i in range(3))


def sobolev_shell_orders(K=512):
    """Shell-sum exponent s: E_j ~ L_j^{-2s} over dyadic shells."""
    out = {}
    fams = {
        "delta": lambda n: 1.0,
        "inverse_m": lambda n: 0.0 if n == 0 else 1.0 / abs(n),
        "bessel": lambda n: 1.0 / (1 + n * n),
    }
    for name, c in fams.items():
        Ls, Es = [], []
        j = 1
        while 2 ** (j + 1) - 1 <= K:
            ns = [n for n in range(-K, K + 1) if 2**j <= abs(n) < 2 ** (j + 1)]
            Es.append(sum(c(n) ** 2 for n in ns))
            Ls.append(math.sqrt(sum(n * n for n in ns) / len(ns)))
            j += 1
        s = -np.polyfit(np.log(Ls), np.log(Es), 1)[0] / 2
        out[name] = float(s)
    return out


def sobolev_shell_orders_geometric(K=512):
    """Same shell fit with the shell center 2^j sqrt 2 as the representative |n|."""
    out = {}
    fams = {
        "delta": lambda n: 1.0,
        "inverse_m": lambda n: 0.0 if n == 0 else 1.0 / abs(n),
        "bessel": lambda n: 1.0 / (1 + n * n),
    }
    for name, c in fams.items():
        Ls, Es = [], []
        j = 1
        while 2 ** (j + 1) - 1 <= K:
            Es.append(sum(c(n) ** 2 for n in range(-K, K + 1) if 2**j <= abs(n) < 2 ** (j + 1)))
            Ls.append(2**j * math.sqrt(2))
            j += 1
        out[name] = float(-np.polyfit(np.log(Ls), np.log(Es), 1)[0] / 2)
    return out


def moments_2d_gauss_hermite():
    """Moments of the order-4 Gauss-Hermite profile tensor square by dense quadrature."""
    x = np.linspace(-12, 12, 24001)
    dx = x[1] - x[0]
    he0 = np.ones_like(x)
    he2 = x**2 - 1
    he4 = x**4 - 6 * x**2 + 3
    phi = np.exp(-x * x / 2) / math.sqrt(2 * math.pi)
    rho = (he0 - he2 / 2 + he4 / 8) * phi
    m = [float(np.sum(x**k * rho) * dx) for k in range(7)]
    return m


def pointwise_product_norm(K=16, seed=3):
    """||M_f u||_0 for f = e^{ix} + 0.5 and random u, via pointwise products on 4096 samples."""
    rng = np.random.default_rng(seed)
    k = np.arange(-K, K + 1)
    u = rng.standard_normal(2 * K + 1) + 1j * rng.standard_normal(2 * K + 1)
    N = 4096
    x = 2 * math.pi * np.arange(N) / N
    E = np.exp(1j * np.outer(x, k)) / math.sqrt(2 * math.pi)
    fu = (np.exp(1j * x) + 0.5) * (E @ u)
    # project back onto |n| <= K
    c = E.conj().T @ fu * (2 * math.pi / N)
    return float(np.linalg.norm(c)), u


if __name__ == "__main__":
    print("weyl_hs_slope", repr(weyl_hs_slope()))
    print("weyl_hs2_slope K=512", repr(weyl_hs2_slope()))
    print("delta_sobolev_minus1", repr(delta_sobolev_minus1()))
    print("graded_norm_diag", repr(graded_norm_diag()))
    print("trace_unit", repr(trace_unit()))
    print("delta_net_slopes", [repr(s) for s in delta_net_slopes()])
    print("delta_square_slope", repr(delta_square_slope()))
    print("trace_action_slope", repr(trace_action_slope()))
    print("heis_dist_example", heis_dist_example())
    print("sobolev_shell_orders", sobolev_shell_orders())
    print("sobolev_shell_orders_geometric", sobolev_shell_orders_geometric())
    print("gauss_hermite moments", moments_2d_gauss_hermite())
