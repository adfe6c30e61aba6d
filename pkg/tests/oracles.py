"""Independent brute-force reference implementations used only by tests.

Everything here works on plain dicts keyed by frozensets of labels and
enumerates the full power set, deliberately avoiding the package's
bit-code representation and sparse tuple enumeration so the two routes
share no code.
"""

from itertools import chain, combinations, product

import numpy as np


def powerset(labels):
    """All subsets of ``labels`` as frozensets, the empty set included."""
    labels = tuple(labels)
    return [
        frozenset(c)
        for c in chain.from_iterable(
            combinations(labels, r) for r in range(len(labels) + 1)
        )
    ]


def to_setdict(m):
    """Package MassFunction -> {frozenset(labels): mass}."""
    return {
        frozenset(m.frame.members(code)): value for code, value in m.items()
    }


def bel_oracle(setdict, labels, subset):
    total = 0.0
    for y in powerset(labels):
        if y and y <= frozenset(subset):
            total += setdict.get(y, 0.0)
    return total


def pl_oracle(setdict, labels, subset):
    total = 0.0
    for y in powerset(labels):
        if y & frozenset(subset):
            total += setdict.get(y, 0.0)
    return total


def betp_oracle(setdict, labels, subset):
    subset = frozenset(subset)
    conflict = setdict.get(frozenset(), 0.0)
    total = 0.0
    for y, v in setdict.items():
        if not y:
            continue
        total += len(subset & y) / len(y) * v
    return total / (1.0 - conflict)


def conjunctive_oracle(setdicts):
    out = {}
    theta = frozenset().union(*(y for d in setdicts for y in d))
    for combo in product(*(list(d.items()) for d in setdicts)):
        inter = theta
        prod = 1.0
        for y, v in combo:
            inter = inter & y
            prod *= v
        out[inter] = out.get(inter, 0.0) + prod
    return out


def dubois_prade_oracle(setdicts):
    out = {}
    theta = frozenset().union(*(y for d in setdicts for y in d))
    for combo in product(*(list(d.items()) for d in setdicts)):
        inter = theta
        union = frozenset()
        prod = 1.0
        for y, v in combo:
            inter = inter & y
            union = union | y
            prod *= v
        target = inter if inter else union
        out[target] = out.get(target, 0.0) + prod
    return out


def pcr_oracle(setdicts):
    """Literal transcription of the M-source proportional redistribution.

    For every source i and focal set X of that source, sums over the
    (M-1)-tuples of the other sources' focal sets (reindexed to skip i)
    whose overall intersection with X is empty the quantity

        m_i(X)^2 * prod(others) / (m_i(X) + sum(others))

    skipping any tuple with a null denominator, and adds the conjunctive
    mass of X.
    """
    n = len(setdicts)
    out = {k: v for k, v in conjunctive_oracle(setdicts).items() if k}
    for i in range(n):
        others = [setdicts[j] for j in range(n) if j != i]
        for x, mx in setdicts[i].items():
            for combo in product(*(list(d.items()) for d in others)):
                inter = x
                for y, _ in combo:
                    inter = inter & y
                if inter:
                    continue
                denom = mx + sum(v for _, v in combo)
                if denom == 0.0:
                    continue
                prod = 1.0
                for _, v in combo:
                    prod *= v
                out[x] = out.get(x, 0.0) + mx * mx * prod / denom
    return out


def random_setdict(rng, labels, max_focals=4, allow_empty=False):
    """Random basic belief assignment as a {frozenset: mass} dict."""
    subsets = powerset(labels)
    if not allow_empty:
        subsets = [s for s in subsets if s]
    k = int(rng.integers(1, min(max_focals, len(subsets)) + 1))
    chosen = rng.choice(len(subsets), size=k, replace=False)
    weights = rng.random(k) + 1e-3
    weights /= weights.sum()
    return {subsets[idx]: float(w) for idx, w in zip(chosen, weights)}


def setdict_to_mass(setdict, frame):
    from massfuse.belief import MassFunction

    return MassFunction(
        frame, {frame.code(labels): v for labels, v in setdict.items()}
    )


def neuron_forward_oracle(weights, biases, x, slope):
    """Per-neuron scalar recomputation of the layered sigmoid forward pass."""
    import math

    acts = list(x)
    for w, b in zip(weights, biases):
        nxt = []
        for j in range(w.shape[1]):
            z = b[j]
            for i in range(w.shape[0]):
                z += acts[i] * w[i, j]
            nxt.append(1.0 / (1.0 + math.exp(-slope * z)))
        acts = nxt
    return np.array(acts)


def haralick_oracle(p):
    """Double-loop recomputation of the six co-occurrence statistics."""
    import math

    n = p.shape[0]
    homog = contrast = entropy = direct = uniform = 0.0
    mu_i = mu_j = 0.0
    for i in range(n):
        for j in range(n):
            v = p[i, j]
            homog += v / (1 + abs(i - j))
            contrast += (i - j) ** 2 * v
            if v > 0:
                entropy -= v * math.log2(v)
            uniform += v * v
            mu_i += i * v
            mu_j += j * v
        direct += p[i, i]
    var_i = var_j = cov = 0.0
    for i in range(n):
        for j in range(n):
            v = p[i, j]
            var_i += (i - mu_i) ** 2 * v
            var_j += (j - mu_j) ** 2 * v
            cov += (i - mu_i) * (j - mu_j) * v
    sigma = math.sqrt(var_i) * math.sqrt(var_j)
    corr = cov / sigma if sigma > 0 else 0.0
    return homog, contrast, entropy, corr, direct, uniform
