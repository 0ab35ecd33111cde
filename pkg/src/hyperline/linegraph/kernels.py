"""Compiled inner loops for s-line graph construction.

Every kernel processes an explicit array of source hyperedge IDs so the caller
decides the work partition, and runs with the GIL released so several kernels can
execute concurrently on worker threads. Kernels return the emitted pairs (in
source orientation) plus a counter vector laid out as ``COUNTER_FIELDS``.

The CSR arrays follow :class:`hyperline.hypergraph.Hypergraph`: ``e_ptr/e_idx``
map a hyperedge to its sorted vertices, ``v_ptr/v_idx`` a vertex to its sorted
hyperedges.
"""

import numpy as np
from numba import njit

COUNTER_FIELDS = ("sources", "members", "visits", "wedges", "set_intersections", "emitted")
N_COUNTERS = len(COUNTER_FIELDS)
_SOURCES, _MEMBERS, _VISITS, _WEDGES, _INTERSECTIONS, _EMITTED = range(N_COUNTERS)

_EMPTY = -1
_HASH_MULT = np.int64(-7046029254386353131)  # 0x9E3779B97F4A7C15 as signed


@njit(nogil=True, cache=True)
def _grow(buf, n):
    if n < buf.shape[0]:
        return buf
    out = np.empty(max(16, 2 * buf.shape[0]), dtype=buf.dtype)
    out[:n] = buf[:n]
    return out


@njit(nogil=True, cache=True)
def _next_pow2(x):
    c = 8
    while c < x:
        c *= 2
    return c


@njit(nogil=True, cache=True)
def _wedge_bound(i, e_ptr, e_idx, v_ptr):
    total = 0
    for p in range(e_ptr[i], e_ptr[i + 1]):
        v = e_idx[p]
        total += v_ptr[v + 1] - v_ptr[v]
    return total


# -- open-addressing overlap accumulator -------------------------------------
#
# keys[] holds candidate edge IDs (or _EMPTY), vals[] their running overlap count,
# order[] the occupied slots in first-insertion order so iteration and clearing
# only touch live entries.


@njit(nogil=True, cache=True)
def _acc_new(capacity):
    return (np.full(capacity, _EMPTY, dtype=np.int64),
            np.zeros(capacity, dtype=np.int64),
            np.empty(capacity, dtype=np.int64))


@njit(nogil=True, cache=True)
def _acc_increment(keys, vals, order, n_used, key):
    mask = keys.shape[0] - 1
    slot = ((key * _HASH_MULT) >> 17) & mask
    while True:
        k = keys[slot]
        if k == key:
            vals[slot] += 1
            return n_used
        if k == _EMPTY:
            keys[slot] = key
            vals[slot] = 1
            order[n_used] = slot
            return n_used + 1
        slot = (slot + 1) & mask


@njit(nogil=True, cache=True)
def _acc_clear(keys, vals, order, n_used):
    for t in range(n_used):
        slot = order[t]
        keys[slot] = _EMPTY
        vals[slot] = 0


@njit(nogil=True, cache=True)
def _count_overlaps(i, e_ptr, e_idx, v_ptr, v_idx, upper, keys, vals, order, counters):
    """Wedge loop of the hashmap algorithm: count every (e_i, v_k, e_j) once."""
    n_used = 0
    for p in range(e_ptr[i], e_ptr[i + 1]):
        v = e_idx[p]
        counters[_MEMBERS] += 1
        lo = v_ptr[v]
        hi = v_ptr[v + 1]
        if upper:
            # incident lists are sorted: walk down from the top while j > i
            q = hi - 1
            while q >= lo and v_idx[q] > i:
                n_used = _acc_increment(keys, vals, order, n_used, v_idx[q])
                q -= 1
            counters[_VISITS] += hi - 1 - q
        else:
            q = lo
            while q < hi and v_idx[q] < i:
                n_used = _acc_increment(keys, vals, order, n_used, v_idx[q])
                q += 1
            counters[_VISITS] += q - lo
    counters[_WEDGES] += n_used
    return n_used


@njit(nogil=True, cache=True)
def hashmap_kernel(sources, e_ptr, e_idx, v_ptr, v_idx, s, prune, upper, preallocated):
    """Single-s construction by overlap counting; never intersects neighbour lists."""
    counters = np.zeros(N_COUNTERS, dtype=np.int64)
    out_u = np.empty(64, dtype=np.int64)
    out_v = np.empty(64, dtype=np.int64)
    n_out = 0

    capacity = 8
    if preallocated:
        worst = 0
        for t in range(sources.shape[0]):
            b = _wedge_bound(sources[t], e_ptr, e_idx, v_ptr)
            if b > worst:
                worst = b
        capacity = _next_pow2(2 * min(worst, e_ptr.shape[0] - 1) + 1)
    keys, vals, order = _acc_new(capacity)

    for t in range(sources.shape[0]):
        i = sources[t]
        size_i = e_ptr[i + 1] - e_ptr[i]
        if prune and size_i < s:
            continue
        counters[_SOURCES] += 1
        if not preallocated:
            need = _next_pow2(2 * min(_wedge_bound(i, e_ptr, e_idx, v_ptr), e_ptr.shape[0] - 1) + 1)
            keys, vals, order = _acc_new(need)
        n_used = _count_overlaps(i, e_ptr, e_idx, v_ptr, v_idx, upper, keys, vals, order, counters)
        for r in range(n_used):
            slot = order[r]
            if vals[slot] >= s:
                out_u = _grow(out_u, n_out)
                out_v = _grow(out_v, n_out)
                out_u[n_out] = i
                out_v[n_out] = keys[slot]
                n_out += 1
        if preallocated:
            _acc_clear(keys, vals, order, n_used)
    counters[_EMITTED] = n_out
    return out_u[:n_out], out_v[:n_out], counters


@njit(nogil=True, cache=True)
def ensemble_count_kernel(sources, e_ptr, e_idx, v_ptr, v_idx, s_min, prune, upper):
    """Counting pass of the ensemble algorithm: keep (e_i, e_j, inc) for every overlapping pair."""
    counters = np.zeros(N_COUNTERS, dtype=np.int64)
    out_u = np.empty(64, dtype=np.int64)
    out_v = np.empty(64, dtype=np.int64)
    out_c = np.empty(64, dtype=np.int64)
    n_out = 0
    for t in range(sources.shape[0]):
        i = sources[t]
        if prune and e_ptr[i + 1] - e_ptr[i] < s_min:
            continue
        counters[_SOURCES] += 1
        need = _next_pow2(2 * min(_wedge_bound(i, e_ptr, e_idx, v_ptr), e_ptr.shape[0] - 1) + 1)
        keys, vals, order = _acc_new(need)
        n_used = _count_overlaps(i, e_ptr, e_idx, v_ptr, v_idx, upper, keys, vals, order, counters)
        for r in range(n_used):
            slot = order[r]
            out_u = _grow(out_u, n_out)
            out_v = _grow(out_v, n_out)
            out_c = _grow(out_c, n_out)
            out_u[n_out] = i
            out_v[n_out] = keys[slot]
            out_c[n_out] = vals[slot]
            n_out += 1
    counters[_EMITTED] = n_out
    return out_u[:n_out], out_v[:n_out], out_c[:n_out], counters


@njit(nogil=True, cache=True)
def _bounded_intersection(e_idx, a0, a1, b0, b1, s):
    """Merge-count |A ∩ B|, stopping once s is reached or can no longer be reached."""
    count = 0
    pa = a0
    pb = b0
    while pa < a1 and pb < b1:
        if count >= s:
            break
        if count + min(a1 - pa, b1 - pb) < s:
            break
        x = e_idx[pa]
        y = e_idx[pb]
        if x == y:
            count += 1
            pa += 1
            pb += 1
        elif x < y:
            pa += 1
        else:
            pb += 1
    return count


@njit(nogil=True, cache=True)
def intersection_kernel(sources, e_ptr, e_idx, v_ptr, v_idx, s, prune, upper):
    """Wedge-driven construction with one bounded set intersection per candidate pair.

    A per-worker stamp array skips candidates already examined for the current
    source edge.
    """
    m = e_ptr.shape[0] - 1
    counters = np.zeros(N_COUNTERS, dtype=np.int64)
    seen = np.full(m, -1, dtype=np.int64)
    out_u = np.empty(64, dtype=np.int64)
    out_v = np.empty(64, dtype=np.int64)
    n_out = 0
    for t in range(sources.shape[0]):
        i = sources[t]
        a0 = e_ptr[i]
        a1 = e_ptr[i + 1]
        if prune and a1 - a0 < s:
            continue
        counters[_SOURCES] += 1
        for p in range(a0, a1):
            v = e_idx[p]
            counters[_MEMBERS] += 1
            lo = v_ptr[v]
            hi = v_ptr[v + 1]
            for r in range(hi - lo):
                # same sorted early-stop scan as the hashmap kernel
                q = hi - 1 - r if upper else lo + r
                j = v_idx[q]
                if (upper and j <= i) or (not upper and j >= i):
                    break
                counters[_VISITS] += 1
                if seen[j] == i:
                    continue
                seen[j] = i
                counters[_WEDGES] += 1
                b0 = e_ptr[j]
                b1 = e_ptr[j + 1]
                if prune and b1 - b0 < s:
                    continue
                counters[_INTERSECTIONS] += 1
                if _bounded_intersection(e_idx, a0, a1, b0, b1, s) >= s:
                    out_u = _grow(out_u, n_out)
                    out_v = _grow(out_v, n_out)
                    out_u[n_out] = i
                    out_v[n_out] = j
                    n_out += 1
    counters[_EMITTED] = n_out
    return out_u[:n_out], out_v[:n_out], counters


@njit(nogil=True, cache=True)
def _full_intersection(e_idx, a0, a1, b0, b1):
    count = 0
    pa = a0
    pb = b0
    while pa < a1 and pb < b1:
        x = e_idx[pa]
        y = e_idx[pb]
        if x == y:
            count += 1
            pa += 1
            pb += 1
        elif x < y:
            pa += 1
        else:
            pb += 1
    return count


@njit(nogil=True, cache=True)
def naive_kernel(sources, e_ptr, e_idx, s):
    """All-pairs reference: intersect e_i with every e_j, j > i, no shortcuts."""
    m = e_ptr.shape[0] - 1
    counters = np.zeros(N_COUNTERS, dtype=np.int64)
    out_u = np.empty(64, dtype=np.int64)
    out_v = np.empty(64, dtype=np.int64)
    n_out = 0
    for t in range(sources.shape[0]):
        i = sources[t]
        counters[_SOURCES] += 1
        for j in range(i + 1, m):
            counters[_INTERSECTIONS] += 1
            if _full_intersection(e_idx, e_ptr[i], e_ptr[i + 1], e_ptr[j], e_ptr[j + 1]) >= s:
                out_u = _grow(out_u, n_out)
                out_v = _grow(out_v, n_out)
                out_u[n_out] = i
                out_v[n_out] = j
                n_out += 1
    counters[_EMITTED] = n_out
    return out_u[:n_out], out_v[:n_out], counters


@njit(nogil=True, cache=True)
def spgemm_upper_flops(e_ptr, e_idx, v_ptr, v_idx):
    """Number of scalar multiply-adds in the upper triangle (diagonal included) of H^T H."""
    total = 0
    m = e_ptr.shape[0] - 1
    for i in range(m):
        for p in range(e_ptr[i], e_ptr[i + 1]):
            v = e_idx[p]
            for q in range(v_ptr[v], v_ptr[v + 1]):
                if v_idx[q] >= i:
                    total += 1
    return total


@njit(nogil=True, cache=True)
def spgemm_upper_kernel(rows, e_ptr, e_idx, v_ptr, v_idx):
    """Gustavson row-merge (ikj order) for the upper triangle of H^T H.

    Uses a dense sparse-accumulator of width m with an occupancy list. Returns
    the materialised rows as (row_ids, row_lengths, col, val) with each row's
    columns sorted; the diagonal entry holds the edge size.
    """
    m = e_ptr.shape[0] - 1
    counters = np.zeros(N_COUNTERS, dtype=np.int64)
    spa = np.zeros(m, dtype=np.int64)
    occupied = np.empty(m, dtype=np.int64)
    lengths = np.zeros(rows.shape[0], dtype=np.int64)
    cols = np.empty(64, dtype=np.int64)
    data = np.empty(64, dtype=np.int64)
    nnz = 0
    for t in range(rows.shape[0]):
        i = rows[t]
        counters[_SOURCES] += 1
        n_occ = 0
        for p in range(e_ptr[i], e_ptr[i + 1]):
            k = e_idx[p]
            counters[_MEMBERS] += 1
            for q in range(v_ptr[k], v_ptr[k + 1]):
                j = v_idx[q]
                if j < i:
                    continue
                counters[_VISITS] += 1
                if spa[j] == 0:
                    occupied[n_occ] = j
                    n_occ += 1
                spa[j] += 1
        row = np.sort(occupied[:n_occ])
        for r in range(n_occ):
            j = row[r]
            cols = _grow(cols, nnz)
            data = _grow(data, nnz)
            cols[nnz] = j
            data[nnz] = spa[j]
            spa[j] = 0
            nnz += 1
        lengths[t] = n_occ
    counters[_WEDGES] = nnz
    return lengths, cols[:nnz], data[:nnz], counters


@njit(nogil=True, cache=True)
def filter_upper(row_ids, lengths, cols, data, s):
    """Boolean filtration of materialised upper-triangle rows: keep j != i with value >= s."""
    out_u = np.empty(64, dtype=np.int64)
    out_v = np.empty(64, dtype=np.int64)
    n_out = 0
    pos = 0
    for t in range(row_ids.shape[0]):
        i = row_ids[t]
        for r in range(pos, pos + lengths[t]):
            if cols[r] != i and data[r] >= s:
                out_u = _grow(out_u, n_out)
                out_v = _grow(out_v, n_out)
                out_u[n_out] = i
                out_v[n_out] = cols[r]
                n_out += 1
        pos += lengths[t]
    return out_u[:n_out], out_v[:n_out]
