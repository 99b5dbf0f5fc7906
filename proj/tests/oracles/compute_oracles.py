"""High-precision reference values frozen into the C++ unit tests.

Everything here goes through mpmath quadrature or closed forms evaluated at
40 digits; nothing imports or mirrors the library code paths.
"""
import mpmath as mp

mp.mp.dps = 40


def omega(a):
    return -1 / (mp.cos(mp.pi * a / 2) * mp.gamma(a))


def C(a):
    return a * 2 ** (a - 1) * mp.gamma((a + 1) / 2) / (mp.sqrt(mp.pi) * mp.gamma(1 - a / 2))


def c_int(a):
    return 2 ** (1 - a) / mp.gamma(a / 2) ** 2


def h(x, a):
    x = abs(mp.mpf(x))
    # z = 1 + u^(2/a) removes the (z-1)^(a/2-1) endpoint singularity
    top = (x - 1) ** (a / 2)
    f = lambda u: (2 / a) * (2 + u ** (2 / a)) ** (a / 2 - 1)
    return mp.quad(f, [0, top])


def J(t, a):
    # s = u^(2/a)
    f = lambda u: (2 / a) * (1 + u ** (2 / a)) ** (a / 2 - 1)
    return mp.quad(f, [0, mp.mpf(t) ** (a / 2)])


def K(a):
    pref = 2 * c_int(a) * (1 - a / 2) * mp.gamma(a / 2) / mp.gamma(1 - a / 2)
    f = lambda v: (v * v - 1) ** (a / 2 - 1) / (1 + v)
    return pref * mp.quad(f, [1, 2, 10, 100, mp.inf])


def g_punct(x, y, a):
    return omega(a) / 2 * (abs(y) ** (a - 1) + abs(x) ** (a - 1) - abs(y - x) ** (a - 1))


def g_int(x, y, a):
    x, y = mp.mpf(x), mp.mpf(y)
    return c_int(a) * (abs(x - y) ** (a - 1) * h(abs(x * y - 1) / abs(x - y), a) - (a - 1) * h(x, a) * h(y, a))


def g_half(x, y, a):
    x, y = mp.mpf(x), mp.mpf(y)
    return abs(x - y) ** (a - 1) * J(min(x, y) / abs(x - y), a) / mp.gamma(a / 2) ** 2


def delta_plus_closed(g, a):
    return (a - 1) ** (a - 1) / ((a * g - 1) ** (a * g) * (a * (g - 1)) ** (a * (1 - g)))


def p1_offdiag_brute(k, a, hh=1):
    # -C * int int phi_0(x) phi_k(y) |x-y|^{-1-a} dx dy on a unit mesh
    phi = lambda t: max(0, 1 - abs(t))
    def inner(x):
        return mp.quad(lambda y: phi(y - k) / abs(y - x) ** (1 + a), [k - 1, k, k + 1])
    return -C(a) * mp.quad(lambda x: phi(x) * inner(x), [-1, 0, 1])


def U0_one(x, a, gam):
    s = lambda y: (1 + abs(y)) ** (-a * gam)
    f = lambda y: g_punct(x, y, a) * s(y)
    pts = sorted(set([-mp.inf, -10, -1, 0, 1, 10, x, mp.inf]))
    return mp.quad(f, pts)


def II_sqrt_h0(x, a, gam):
    w = omega(a)
    f = lambda y: mp.sqrt(w / 2 * abs(y) ** (a - 1))
    s = lambda y: (1 + abs(y)) ** (-a * gam)
    pts = sorted(set([-mp.inf, -10, -1, 0, 1, 10, x, mp.inf]))
    return mp.quad(lambda y: g_punct(x, y, a) * f(y) * s(y), pts) / f(x)


def II_plus_nested(x, a, gam):
    # brute nested form, no change of variables
    phi = lambda y: y ** ((a - 1) / 2)
    g = lambda y: phi(y) * (1 + y) ** (-a * gam)
    R = lambda z: mp.quad(g, [z, z + 1, mp.inf])
    outer = mp.quad(lambda z: z ** (a - 2) * R(z), [0, x])
    return outer / (mp.gamma(a / 2) ** 2 * phi(x))


if __name__ == "__main__":
    for a in (1.2, 1.5, 1.8):
        a = mp.mpf(a)
        print(f"alpha={a}: omega={mp.nstr(omega(a), 17)} C={mp.nstr(C(a), 17)} c={mp.nstr(c_int(a), 17)} K={mp.nstr(K(a), 17)}")
    print("C(1+1e-6)", mp.nstr(C(1 + mp.mpf('1e-6')), 17), "1/pi", mp.nstr(1 / mp.pi, 17))
    for z in ('1.2', '1.5', '1.8', '0.25', '0.75', '-0.25', '-0.5'):
        print("gamma", z, mp.nstr(mp.gamma(mp.mpf(z)), 20))
    print("h(2,1.5)", mp.nstr(h(2, 1.5), 20))
    print("h(3,1.2)", mp.nstr(h(3, 1.2), 20))
    print("h(50,1.8)", mp.nstr(h(50, 1.8), 20))
    print("h(1.01,1.5)", mp.nstr(h(1.01, 1.5), 20))
    print("h(1e6,1.5)", mp.nstr(h(10**6, 1.5), 20))
    print("J(1,1.5)", mp.nstr(J(1, 1.5), 20))
    print("J(10,1.2)", mp.nstr(J(10, 1.2), 20))
    print("J(0.01,1.8)", mp.nstr(J(0.01, 1.8), 20))
    print("J(1e4,1.5)", mp.nstr(J(10**4, 1.5), 20))
    print("g_punct(1,-1,1.5)", mp.nstr(g_punct(1, -1, mp.mpf(1.5)), 20))
    print("g_int(2,3,1.5)", mp.nstr(g_int(2, 3, mp.mpf(1.5)), 20))
    print("g_int(-2,5,1.2)", mp.nstr(g_int(-2, 5, mp.mpf(1.2)), 20))
    print("g_half(1,2,1.5)", mp.nstr(g_half(1, 2, mp.mpf(1.5)), 20))
    print("g_half(0.3,7,1.8)", mp.nstr(g_half(0.3, 7, mp.mpf(1.8)), 20))
    print("g_half diag(1,1.5)", mp.nstr(1 / (mp.mpf(0.5) * mp.gamma(0.75) ** 2), 20))
    for g in (1.5, 2, 3):
        for a in (1.2, 1.5, 1.8):
            print("delta_plus", g, a, mp.nstr(delta_plus_closed(mp.mpf(g), mp.mpf(a)), 20))
    a = mp.mpf(1.5)
    print("I poly2", mp.nstr(2 * mp.quad(lambda x: x ** (a - 1) * (1 + x) ** (-3), [0, 1, mp.inf]), 20), mp.nstr(mp.pi / 4, 20))
    print("I poly1.5 a1.5", mp.nstr(2 * mp.quad(lambda x: x ** (a - 1) * (1 + x) ** (-a * 1.5), [0, 1, mp.inf]), 20))
    print("mu poly1 a1.5", mp.nstr(2 * mp.quad(lambda x: (1 + x) ** (-a), [0, mp.inf]), 20))
    for k in (2, 3, 5):
        print("p1_offdiag", k, mp.nstr(p1_offdiag_brute(k, a), 20))
    print("U0 one x=5 poly2", mp.nstr(U0_one(5, a, 2), 20))
    print("U0 one x=0.5 poly2", mp.nstr(U0_one(mp.mpf('0.5'), a, 2), 20))
    for x in ('0.1', '1', '10'):
        print("II poly2", x, mp.nstr(II_sqrt_h0(mp.mpf(x), a, 2), 20))
    print("II poly1.5 x=1", mp.nstr(II_sqrt_h0(mp.mpf(1), a, mp.mpf(1.5)), 20))
    for x in ('1e-4', '1e-3', '0.5', '2', '20'):
        print("II+ poly2", x, mp.nstr(II_plus_nested(mp.mpf(x), a, 2), 20))
