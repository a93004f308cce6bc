"""Regenerates the reference tables in this directory with mpmath (50 digits)."""
import mpmath as mp

mp.mp.dps = 50
HERE = __file__.rsplit("/", 1)[0]


def airy_table():
    xs = [mp.mpf(k) / 8 for k in range(-80 * 8, 40 * 8 + 1, 7)]
    xs += [mp.mpf(v) for v in ("-250.5", "-99.3", "-31.7", "17.25", "33.3", "60")]
    with open(f"{HERE}/airy.txt", "w") as f:
        f.write("# x Ai(x) Ai'(x)\n")
        for x in xs:
            f.write(f"{mp.nstr(x, 20)} {mp.nstr(mp.airyai(x), 25)} {mp.nstr(mp.airyai(x, 1), 25)}\n")


def recurrence_from_weight(nodes, weights, n):
    """Stieltjes procedure on a discrete measure, in high precision."""
    m = len(nodes)
    p_prev = [mp.mpf(0)] * m
    p = [mp.mpf(1)] * m
    norm = mp.sqrt(mp.fsum(w * q * q for w, q in zip(weights, p)))
    p = [q / norm for q in p]
    a, b = [], [mp.mpf(0)]
    for k in range(n):
        ak = mp.fsum(w * x * q * q for w, x, q in zip(weights, nodes, p))
        r = [(x - ak) * q - b[-1] * qp for x, q, qp in zip(nodes, p, p_prev)]
        bk = mp.sqrt(mp.fsum(w * q * q for w, q in zip(weights, r)))
        a.append(ak)
        b.append(bk)
        p_prev, p = p, [q / bk for q in r]
    return a, b


def quartic_recurrence(n=10):
    # w(x) = exp(-n x^4 / 4) on R; Gauss-Legendre on [-L, L] resolves it to 50 digits.
    L = mp.mpf(5)
    xs, ws = [], []
    for j in range(40):
        lo, hi = -L + 2 * L * j / 40, -L + 2 * L * (j + 1) / 40
        for t, w in zip(*gl(60)):
            x = (lo + hi) / 2 + (hi - lo) / 2 * t
            xs.append(x)
            ws.append(w * (hi - lo) / 2 * mp.exp(-n * x**4 / 4))
    a, b = recurrence_from_weight(xs, ws, n)
    with open(f"{HERE}/quartic_recurrence.txt", "w") as f:
        f.write(f"# V = x^4/4, n = {n}: k a_k b_(k+1)\n")
        for k in range(n):
            f.write(f"{k} {mp.nstr(a[k], 25)} {mp.nstr(b[k + 1], 25)}\n")


_gl_cache = {}


def gl(m):
    if m not in _gl_cache:
        xs, ws = [], []
        for k in range(m):
            x = mp.cos(mp.pi * (k + mp.mpf(3) / 4) / (m + mp.mpf(1) / 2))
            for _ in range(100):
                p0, p1 = mp.mpf(1), x
                for j in range(2, m + 1):
                    p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
                dp = m * (x * p1 - p0) / (x * x - 1)
                step = p1 / dp
                x -= step
                if abs(step) < mp.mpf(10) ** (-mp.mp.dps + 5):
                    break
            xs.append(x)
            ws.append(2 / ((1 - x * x) * dp * dp))
        _gl_cache[m] = (xs, ws)
    return _gl_cache[m]


def krawtchouk_discrete(N=64, n=32, p=mp.mpf("0.3")):
    nodes = [(2 * mp.mpf(j) + 1) / (2 * N) for j in range(N)]

    def U(x):
        return 1 - x * mp.log(x) - (1 - x) * mp.log(1 - x)

    logw = [-N * (-x * mp.log(p / (1 - p)) - U(x)) for x in nodes]
    top = max(logw)
    ws = [mp.exp(v - top) for v in logw]
    a, b = recurrence_from_weight(nodes, ws, n)
    with open(f"{HERE}/krawtchouk_64_32.txt", "w") as f:
        f.write(f"# quantized nodes N = {N}, n = {n}, p = 0.3: k a_k b_(k+1)\n")
        for k in range(n):
            f.write(f"{k} {mp.nstr(a[k], 25)} {mp.nstr(b[k + 1], 25)}\n")


def fredholm_gap(kernel, lo, hi, m=40):
    xs, ws = gl(m)
    us = [(lo + hi) / 2 + (hi - lo) / 2 * t for t in xs]
    vs = [w * (hi - lo) / 2 for w in ws]
    A = mp.matrix(m, m)
    for i in range(m):
        for j in range(m):
            A[i, j] = (1 if i == j else 0) - mp.sqrt(vs[i]) * kernel(us[i], us[j]) * mp.sqrt(vs[j])
    return mp.det(A)


def sine(u, v):
    d = u - v
    return mp.mpf(1) if d == 0 else mp.sin(mp.pi * d) / (mp.pi * d)


def airy(u, v):
    if u == v:
        return mp.airyai(u, 1) ** 2 - u * mp.airyai(u) ** 2
    return (mp.airyai(u) * mp.airyai(v, 1) - mp.airyai(v) * mp.airyai(u, 1)) / (u - v)


def gaps():
    with open(f"{HERE}/gaps.txt", "w") as f:
        f.write("# kernel lo hi det(I - K) on (lo, hi)\n")
        for s in ("0.1", "0.5", "1.0"):
            s = mp.mpf(s)
            f.write(f"sine {mp.nstr(-s, 6)} {mp.nstr(s, 6)} {mp.nstr(fredholm_gap(sine, -s, s), 25)}\n")
        for s in ("-2", "-1", "0", "1"):
            s = mp.mpf(s)
            f.write(f"airy {mp.nstr(s, 6)} 12 {mp.nstr(fredholm_gap(airy, s, mp.mpf(12), 48), 25)}\n")


if __name__ == "__main__":
    airy_table()
    quartic_recurrence()
    krawtchouk_discrete()
    gaps()
