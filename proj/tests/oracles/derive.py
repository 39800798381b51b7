"""Independent reference computations for values frozen into the C++ tests.

Plain Python, exact enumeration only. Run: python3 tests/oracles/derive.py
"""
import itertools
import math


def massart_gap(k, h):
    rbar = math.sqrt(2 * math.log(h) / k)
    return 4 * rbar + math.sqrt(2 * math.log(2 * k) / k) + 2 / k


def bernstein_gap(k, sq, h):
    if k == 1:
        return math.inf
    lg = math.log(2 * k * h * h)
    return math.sqrt(2 * sq * lg / (k - 1) ** 2) + 5 * lg / (k - 1) + 2 / k


def first_switch_k():
    for k in range(1, 201):
        if massart_gap(k, 2) <= 1:
            return k
    return None


def risk(probs, row):
    return sum(p * l for p, l in zip(probs, row))


def erm(losses, prefix):
    best, best_sum = 0, None
    for h, row in enumerate(losses):
        s = sum(row[z] for z in prefix)
        if best_sum is None or s < best_sum:
            best, best_sum = h, s
    return best


def germ_path(losses, sample, gap, initial=0):
    H = len(losses)
    hat = initial
    out = [hat]
    for k in range(1, len(sample) + 1):
        prefix = sample[:k]
        tilde = erm(losses, prefix)
        lt = sum(losses[tilde][z] for z in prefix) / k
        lh = sum(losses[hat][z] for z in prefix) / k
        if gap == "const0":
            d = math.sqrt(2 * math.log(2 * k) / k) + 2 / k
        elif gap == "massart":
            d = massart_gap(k, H) if H > 1 else math.sqrt(2 * math.log(2 * k) / k) + 2 / k
        else:
            sq = sum((losses[tilde][z] - losses[hat][z]) ** 2 for z in prefix)
            d = bernstein_gap(k, sq, H)
        if lt - lh <= -d:
            hat = tilde
        out.append(hat)
    return out


def exact_curve(probs, losses, n_max, algo):
    m = len(probs)
    curve = [0.0] * (n_max + 1)
    for seq in itertools.product(range(m), repeat=n_max):
        w = math.prod(probs[z] for z in seq)
        if w == 0:
            continue
        if algo == "erm":
            path = [0] + [erm(losses, seq[:k]) for k in range(1, n_max + 1)]
        else:
            path = germ_path(losses, seq, algo)
        for n in range(n_max + 1):
            curve[n] += w * risk(probs, losses[path[n]])
    return curve


def exact_rademacher(probs, losses, k):
    m = len(probs)
    total = 0.0
    for seq in itertools.product(range(m), repeat=k):
        w = math.prod(probs[z] for z in seq)
        for signs in itertools.product((-1, 1), repeat=k):
            sup = max(sum(s * row[z] for s, z in zip(signs, seq)) / k for row in losses)
            total += w * sup / 2 ** k
    return total


def prop1_exceedance(probs, losses, k, delta):
    ref = exact_rademacher(probs, losses, k)
    radius = math.sqrt(2 * math.log(2 / delta) / k)
    m = len(probs)
    bad = 0.0
    for seq in itertools.product(range(m), repeat=k):
        w = math.prod(probs[z] for z in seq)
        for signs in itertools.product((-1, 1), repeat=k):
            sup = max(sum(s * row[z] for s, z in zip(signs, seq)) / k for row in losses)
            if abs(ref - sup) > radius:
                bad += w / 2 ** k
    return bad


def ebern_coverage(probs, losses, n, delta):
    H = len(losses)
    lg = math.log(2 * H * H / delta)
    m = len(probs)
    cov = 0.0
    for seq in itertools.product(range(m), repeat=n):
        w = math.prod(probs[z] for z in seq)
        ok = True
        for a in range(H):
            for b in range(H):
                if a == b:
                    continue
                diff = [losses[a][z] - losses[b][z] for z in seq]
                emp = sum(diff) / n
                pop = risk(probs, losses[a]) - risk(probs, losses[b])
                sq = sum(d * d for d in diff)
                slack = math.sqrt(2 * sq * lg / (n - 1) ** 2) + 5 * lg / (n - 1)
                if pop - emp > slack:
                    ok = False
        if ok:
            cov += w
    return cov


def bernstein_min_b(probs, losses, beta):
    risks = [risk(probs, r) for r in losses]
    star = min(range(len(losses)), key=lambda h: (risks[h], h))
    best = 0.0
    for h, row in enumerate(losses):
        x2 = sum(p * (row[z] - losses[star][z]) ** 2 for z, p in enumerate(probs))
        if x2 == 0:
            continue
        mean = risks[h] - risks[star]
        best = max(best, x2 / mean ** beta if beta > 0 else x2)
    return best


S2 = ([0.5, 0.5], [[0.0, 1.0], [1.0, 0.0]])
S3 = ([0.2, 0.8], [[0.05, 0.55], [0.45, 0.0]])
S6 = ([0.42, 0.58], [[0.0, 1.0], [1.0, 0.0]])
S5 = ([0.5, 0.3, 0.2], [[0.2, 0.6, 0.9], [0.5, 0.1, 0.4], [0.7, 0.5, 0.0]])

if __name__ == "__main__":
    print("closed forms:", [repr(v) for v in (
        math.sqrt(2 * math.log(40) / 100), 5 * math.log(16) + 1,
        math.sqrt(math.log(24)) + 5 * math.log(24) / 2 + 2 / 3,
        3 * math.sqrt(math.log(4)) + 1, 3 * math.sqrt(2 * math.log(400) / 200) + 0.01,
        0.6 + 3 * math.sqrt(2 * math.log(100) / 50) + 0.04,
        math.sqrt(4 * (1 + math.log(2))) + 5 * (1 + math.log(2)))])
    print("first switch k (rows 0/1, initial 1, massart):", first_switch_k())
    print("S3 exact ERM curve n=1..6:", [repr(v) for v in exact_curve(*S3, 6, "erm")[1:]])
    print("S2 exact ERM n=1:", exact_curve(*S2, 1, "erm")[1])
    print("S5 exact ERM curve n=1..5:", [repr(v) for v in exact_curve(*S5, 5, "erm")[1:]])
    print("S5 exact GERM massart n=0..6:", [repr(v) for v in exact_curve(*S5, 6, "massart")])
    print("S5 exact GERM bernstein n=0..6:", [repr(v) for v in exact_curve(*S5, 6, "bernstein")])
    print("S6 exact GERM constant=0 n=0..12:", [repr(v) for v in exact_curve(*S6, 12, "const0")])
    print("S5 exact GERM constant=0 n=8..10:", [repr(v) for v in exact_curve(*S5, 10, "const0")[8:]])
    for k in (1, 2, 3, 4):
        print(f"S5 exact rademacher k={k}:", repr(exact_rademacher(*S5, k)))
    for d in (0.1, 0.25, 0.5):
        print(f"S5 prop1 exceedance k=4 delta={d}:", repr(prop1_exceedance(*S5, 4, d)))
    print("S5 ebern coverage n=4 delta=0.1:", repr(ebern_coverage(*S5, 4, 0.1)))
    print("S5 min B beta=0,0.5,1:", [repr(bernstein_min_b(*S5, b)) for b in (0, 0.5, 1)])
