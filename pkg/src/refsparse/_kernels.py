"""Compiled inner loops.

Everything here operates on plain numpy arrays so the public modules can stay
ordinary Python.  Ladders are stored as ``parent[c, x]`` / ``rank[c, x]`` with
``c = J - 1`` the zero-based cell index of ``D_J``.
"""

import numpy as np
from numba import njit

_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_KEYMUL = np.uint64(0xD6E8FEB86659FD93)
_INV53 = 1.0 / 9007199254740992.0

# coin roles; values are part of the reproducibility contract
ROLE_FAIR = 1
ROLE_GEOM = 2
ROLE_ALG1 = 3
ROLE_EMIT = 4
ROLE_PREFILTER = 5
ROLE_KEEP = 6
ROLE_BK = 7
ROLE_AUDIT = 8
ROLE_DERIVE = 9

# counter slots
CNT_FLIPS = 0
CNT_UF_OPS = 1
CNT_INSERTS = 2
CNT_AUDIT_VIOLATIONS = 3
CNT_AUDIT_QUERIES = 4
N_COUNTERS = 5


@njit(cache=True, inline="always")
def mix64(z):
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


@njit(cache=True)
def coin(seed, key, l, k, role):
    h = mix64(np.uint64(seed) + _GOLDEN)
    h = mix64(h ^ (np.uint64(key) * _KEYMUL + np.uint64(role)))
    h = mix64(h ^ ((np.uint64(l) << np.uint64(32)) | np.uint64(k)))
    return np.float64(h >> np.uint64(11)) * _INV53


@njit(cache=True)
def coin_array(seed, keys, l, k, role):
    out = np.empty(keys.shape[0], dtype=np.float64)
    for i in range(keys.shape[0]):
        out[i] = coin(seed, keys[i], l, k, role)
    return out


@njit(cache=True)
def derive_seed(seed, tag):
    return mix64(mix64(np.uint64(seed) ^ _GOLDEN) + np.uint64(tag) * _KEYMUL + np.uint64(ROLE_DERIVE))


@njit(cache=True, inline="always")
def insert_prob(l, w):
    p = 2.0 ** (-l)
    if w == 1:
        return p
    return -np.expm1(w * np.log1p(-p))


# ---------------------------------------------------------------- union-find


@njit(cache=True)
def uf_find(parent, c, x):
    root = x
    while parent[c, root] != root:
        root = parent[c, root]
    while parent[c, x] != root:
        nxt = parent[c, x]
        parent[c, x] = root
        x = nxt
    return root


@njit(cache=True)
def uf_union(parent, rank, c, x, y):
    rx = uf_find(parent, c, x)
    ry = uf_find(parent, c, y)
    if rx == ry:
        return False
    if rank[c, rx] < rank[c, ry]:
        parent[c, rx] = ry
    elif rank[c, rx] > rank[c, ry]:
        parent[c, ry] = rx
    else:
        parent[c, ry] = rx
        rank[c, rx] += 1
    return True


@njit(cache=True)
def uf_connected(parent, c, x, y):
    return uf_find(parent, c, x) == uf_find(parent, c, y)


@njit(cache=True)
def uf_roots(parent, c):
    n = parent.shape[1]
    out = np.empty(n, dtype=np.int64)
    for x in range(n):
        out[x] = uf_find(parent, c, x)
    return out


# ------------------------------------------------------------------- ladder


@njit(cache=True)
def cell_connected(parent, J, u, v, counters):
    # D_0 is the virtual all-connected structure
    if J == 0 or u == v:
        return True
    counters[CNT_UF_OPS] += 2
    return uf_connected(parent, J - 1, u, v)


@njit(cache=True)
def ladder_threshold(parent, LK, u, v, counters):
    if u == v:
        return LK + 1
    lo = 1
    hi = LK + 1
    while lo < hi:
        mid = (lo + hi) // 2
        if cell_connected(parent, mid, u, v, counters):
            lo = mid + 1
        else:
            hi = mid
    return lo


@njit(cache=True)
def column_threshold(parent, L, K, col, u, v, counters):
    """Smallest level l in [1..L+1] with u, v apart in D_{l,col}."""
    if u == v:
        return L + 1
    lo = 1
    hi = L + 1
    while lo < hi:
        mid = (lo + hi) // 2
        if cell_connected(parent, K * (mid - 1) + col, u, v, counters):
            lo = mid + 1
        else:
            hi = mid
    return lo


@njit(cache=True)
def audit_chain_pair(parent, LK, a, b):
    """Number of chain-order violations for one vertex pair (0 when monotone)."""
    seen_apart = False
    bad = 0
    for J in range(1, LK + 1):
        if uf_connected(parent, J - 1, a, b):
            if seen_apart:
                bad += 1
        else:
            seen_apart = True
    return bad


@njit(cache=True)
def _audit_after_edge(parent, LK, n, seed, key, pairs, counters):
    for i in range(pairs):
        a = int(coin(seed, key, 2 * i, 0, ROLE_AUDIT) * n)
        b = int(coin(seed, key, 2 * i + 1, 0, ROLE_AUDIT) * n)
        counters[CNT_AUDIT_QUERIES] += 1
        counters[CNT_AUDIT_VIOLATIONS] += audit_chain_pair(parent, LK, a, b)


# ------------------------------------------------------------ one-pass core


@njit(cache=True)
def onepass_edge(parent, rank, L, K, u, v, w, key, seed, cell_inserts, counters):
    """Insertion phase plus level lookup for one stream edge.

    Returns (J*, L').
    """
    LK = L * K
    jstar = ladder_threshold(parent, LK, u, v, counters)
    J = jstar
    while J <= LK:
        l = (J - 1) // K + 1
        k = (J - 1) % K + 1
        counters[CNT_FLIPS] += 1
        if coin(seed, key, l, k, ROLE_GEOM) < insert_prob(l, w):
            counters[CNT_UF_OPS] += 2
            uf_union(parent, rank, J - 1, u, v)
            counters[CNT_INSERTS] += 1
            cell_inserts[J - 1] += 1
            J += 1
        else:
            break
    level = column_threshold(parent, L, K, K, u, v, counters)
    return jstar, level


@njit(cache=True)
def onepass_run(parent, rank, L, K, us, vs, ws, keys, seed,
                jstar_out, level_out, cell_inserts, counters, audit_pairs):
    n = parent.shape[1]
    for t in range(us.shape[0]):
        js, lv = onepass_edge(parent, rank, L, K, us[t], vs[t], ws[t], keys[t],
                              seed, cell_inserts, counters)
        jstar_out[t] = js
        level_out[t] = lv
        if audit_pairs > 0:
            _audit_after_edge(parent, L * K, n, seed, keys[t], audit_pairs, counters)


# ----------------------------------------------------------- multi-pass core


@njit(cache=True)
def multipass_pass(parent, rank, L, K, k, us, vs, ws, keys, seed, cell_inserts, counters):
    for t in range(us.shape[0]):
        u = us[t]
        v = vs[t]
        w = ws[t]
        if k == 1:
            lmax = L
        else:
            lmax = column_threshold(parent, L, K, k - 1, u, v, counters) - 1
        qprev = 1.0
        l = 1
        while l <= lmax:
            q = insert_prob(l, w)
            counters[CNT_FLIPS] += 1
            # conditional on surviving level l-1; equals 1/2 for unit weight
            if coin(seed, keys[t], l, k, ROLE_FAIR) < q / qprev:
                c = K * (l - 1) + k - 1
                counters[CNT_UF_OPS] += 2
                uf_union(parent, rank, c, u, v)
                counters[CNT_INSERTS] += 1
                cell_inserts[c] += 1
                qprev = q
                l += 1
            else:
                break


@njit(cache=True)
def column_levels(parent, L, K, col, us, vs, counters):
    out = np.empty(us.shape[0], dtype=np.int64)
    for t in range(us.shape[0]):
        out[t] = column_threshold(parent, L, K, col, us[t], vs[t], counters)
    return out


# --------------------------------------------------------------- refinement


@njit(cache=True)
def refine_labels(n, us, vs, keys, prev_labels, p, seed, l, k, role):
    parent = np.arange(n).reshape(1, n).copy()
    rank = np.zeros((1, n), dtype=np.int8)
    for t in range(us.shape[0]):
        u = us[t]
        v = vs[t]
        if prev_labels[u] != prev_labels[v]:
            continue
        if coin(seed, keys[t], l, k, role) < p:
            uf_union(parent, rank, 0, u, v)
    return uf_roots(parent, 0)


@njit(cache=True)
def frozen_levels(labels, u, v):
    """Least l (1-based) with labels[l-1, u] != labels[l-1, v]; L+1 if none."""
    L = labels.shape[0]
    for l in range(L):
        if labels[l, u] != labels[l, v]:
            return l + 1
    return L + 1


@njit(cache=True)
def truncated_search(labels, u, v, width):
    """Binary search for the separating level in [1, L+1], stopping once
    hi - lo <= width."""
    L = labels.shape[0]
    lo = 1
    hi = L + 1
    steps = 0
    while lo < hi:
        if hi - lo <= width:
            break
        mid = (lo + hi) // 2
        steps += 1
        if labels[mid - 1, u] == labels[mid - 1, v]:
            lo = mid + 1
        else:
            hi = mid
    return lo, steps


@njit(cache=True)
def truncated_search_all(labels, us, vs, width, lo_out):
    total = 0
    for t in range(us.shape[0]):
        lo, steps = truncated_search(labels, us[t], vs[t], width)
        lo_out[t] = lo
        total += steps
    return total


@njit(cache=True)
def frozen_levels_all(labels, us, vs, out):
    for t in range(us.shape[0]):
        out[t] = frozen_levels(labels, us[t], vs[t])


# ------------------------------------------------------------- min cut etc.


@njit(cache=True)
def stoer_wagner(A, verts):
    """Global min cut of the subgraph induced by ``verts`` (sorted, len >= 2).

    Returns (value, mask) where mask marks the side holding verts[0].
    """
    k = verts.shape[0]
    W = np.empty((k, k), dtype=np.float64)
    for i in range(k):
        for j in range(k):
            W[i, j] = A[verts[i], verts[j]]
        W[i, i] = 0.0
    group = np.arange(k)
    active = np.ones(k, dtype=np.bool_)
    best = np.inf
    best_mask = np.zeros(k, dtype=np.bool_)
    wsum = np.zeros(k, dtype=np.float64)
    added = np.zeros(k, dtype=np.bool_)
    for phase in range(k - 1):
        nact = k - phase
        wsum[:] = 0.0
        added[:] = False
        prev = -1
        last = -1
        for it in range(nact):
            sel = -1
            bw = 0.0
            for i in range(k):
                if active[i] and not added[i]:
                    if sel == -1 or wsum[i] > bw:
                        sel = i
                        bw = wsum[i]
            added[sel] = True
            prev = last
            last = sel
            if it < nact - 1:
                for i in range(k):
                    if active[i] and not added[i]:
                        wsum[i] += W[sel, i]
        cut = wsum[last]
        if cut < best:
            best = cut
            for i in range(k):
                best_mask[i] = group[i] == last
        for i in range(k):
            W[prev, i] += W[last, i]
            W[i, prev] += W[i, last]
        W[prev, prev] = 0.0
        active[last] = False
        for i in range(k):
            if group[i] == last:
                group[i] = prev
    if not best_mask[0]:
        best_mask = ~best_mask
    return best, best_mask


@njit(cache=True)
def component_labels(A, verts):
    k = verts.shape[0]
    comp = -np.ones(k, dtype=np.int64)
    stack = np.empty(k, dtype=np.int64)
    ncomp = 0
    for s in range(k):
        if comp[s] >= 0:
            continue
        comp[s] = ncomp
        top = 0
        stack[top] = s
        top += 1
        while top > 0:
            top -= 1
            a = stack[top]
            va = verts[a]
            for b in range(k):
                if comp[b] < 0 and A[va, verts[b]] > 0.0:
                    comp[b] = ncomp
                    stack[top] = b
                    top += 1
        ncomp += 1
    return comp, ncomp


@njit(cache=True)
def peel(A, verts, thr, inclusive):
    """Iteratively drop vertices whose degree is below thr (or <= thr)."""
    k = verts.shape[0]
    deg = np.zeros(k, dtype=np.float64)
    for i in range(k):
        s = 0.0
        for j in range(k):
            if i != j:
                s += A[verts[i], verts[j]]
        deg[i] = s
    alive = np.ones(k, dtype=np.bool_)
    queued = np.zeros(k, dtype=np.bool_)
    queue = np.empty(k, dtype=np.int64)
    qh = 0
    qt = 0
    for i in range(k):
        if (deg[i] <= thr) if inclusive else (deg[i] < thr):
            queued[i] = True
            queue[qt] = i
            qt += 1
    while qh < qt:
        i = queue[qh]
        qh += 1
        alive[i] = False
        vi = verts[i]
        for j in range(k):
            if alive[j] and not queued[j]:
                a = A[vi, verts[j]]
                if a > 0.0:
                    deg[j] -= a
                    if (deg[j] <= thr) if inclusive else (deg[j] < thr):
                        queued[j] = True
                        queue[qt] = j
                        qt += 1
    return verts[alive]


@njit(cache=True)
def _index_of(verts, x):
    for i in range(verts.shape[0]):
        if verts[i] == x:
            return i
    return -1


@njit(cache=True)
def pair_strength_matrix(A):
    """Recursive min-cut decomposition; S[a, b] is the strength of pair (a, b)."""
    n = A.shape[0]
    S = np.zeros((n, n), dtype=np.float64)
    stack = [np.arange(n)]
    ncuts = 0
    while len(stack) > 0:
        verts = stack.pop()
        comp, ncomp = component_labels(A, verts)
        for c in range(ncomp):
            part = verts[comp == c]
            if part.shape[0] < 2:
                continue
            lam, side = stoer_wagner(A, part)
            ncuts += 1
            for i in range(part.shape[0]):
                for j in range(part.shape[0]):
                    if S[part[i], part[j]] < lam:
                        S[part[i], part[j]] = lam
            kept = peel(A, part, lam, True)
            if kept.shape[0] < part.shape[0]:
                if kept.shape[0] >= 2:
                    stack.append(kept)
            else:
                stack.append(part[side])
                stack.append(part[~side])
    return S, ncuts


@njit(cache=True)
def reaches_threshold(A, verts, u, v, thr):
    """True iff some subset of ``verts`` holding u and v induces a
    subgraph of connectivity >= thr."""
    cur = verts
    while True:
        cur = peel(A, cur, thr, False)
        iu = _index_of(cur, u)
        iv = _index_of(cur, v)
        if iu < 0 or iv < 0:
            return False
        comp, ncomp = component_labels(A, cur)
        if comp[iu] != comp[iv]:
            return False
        part = cur[comp == comp[iu]]
        lam, side = stoer_wagner(A, part)
        if lam >= thr:
            return True
        su = side[_index_of(part, u)]
        if su != side[_index_of(part, v)]:
            return False
        cur = part[side] if su else part[~side]


@njit(cache=True)
def brute_strengths(n, us, vs, ws):
    m = us.shape[0]
    s = np.zeros(m, dtype=np.float64)
    full = (1 << n) - 1
    for T in range(1, full + 1):
        # need at least two vertices
        if T & (T - 1) == 0:
            continue
        low = T & (-T)
        rest = T ^ low
        lam = np.inf
        X = rest
        while True:
            if X != rest:
                side = low | X
                cut = 0.0
                for e in range(m):
                    bu = (T >> us[e]) & 1
                    bv = (T >> vs[e]) & 1
                    if bu and bv:
                        if ((side >> us[e]) & 1) != ((side >> vs[e]) & 1):
                            cut += ws[e]
                if cut < lam:
                    lam = cut
            if X == 0:
                break
            X = (X - 1) & rest
        for e in range(m):
            if ((T >> us[e]) & 1) and ((T >> vs[e]) & 1):
                if lam > s[e]:
                    s[e] = lam
    return s


# -------------------------------------------------------- cut enumeration


@njit(cache=True)
def all_cut_values(n, us, vs, ws):
    """Values of every cut, indexed by i with side mask (i << 1) | 1."""
    ncuts = (1 << (n - 1)) - 1
    out = np.zeros(ncuts, dtype=np.float64)
    m = us.shape[0]
    for i in range(ncuts):
        side = (i << 1) | 1
        s = 0.0
        for e in range(m):
            if ((side >> us[e]) & 1) != ((side >> vs[e]) & 1):
                s += ws[e]
        out[i] = s
    return out


@njit(cache=True)
def certificate_violations(n, us, vs, ws, in_cert, bound):
    """Side masks of cuts with value <= bound that have a crossing edge
    outside the certificate."""
    ncuts = (1 << (n - 1)) - 1
    m = us.shape[0]
    found = []
    for i in range(ncuts):
        side = (i << 1) | 1
        s = 0.0
        missing = False
        for e in range(m):
            if ((side >> us[e]) & 1) != ((side >> vs[e]) & 1):
                s += ws[e]
                if not in_cert[e]:
                    missing = True
        if missing and s <= bound:
            found.append(side)
    out = np.empty(len(found), dtype=np.int64)
    for i in range(len(found)):
        out[i] = found[i]
    return out


@njit(cache=True)
def sampled_components(n, us, vs, keys, p, seed, trial):
    parent = np.arange(n).reshape(1, n).copy()
    rank = np.zeros((1, n), dtype=np.int8)
    comps = n
    for t in range(us.shape[0]):
        if coin(seed, keys[t], trial, 0, ROLE_BK) < p:
            if uf_union(parent, rank, 0, us[t], vs[t]):
                comps -= 1
    return comps
