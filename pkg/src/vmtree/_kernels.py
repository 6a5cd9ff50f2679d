"""Compiled inner loops for the tree dynamic programs.

Every congestion value handled here is a ratio ``num / den`` of non-negative
integers below 2**53, carried together with its float quotient. Floats decide
comparisons when they differ (the quotient of exactly representable integers
is correctly rounded, hence monotone); equal floats fall back to an exact
128-bit cross-multiplication. Infeasible is ``(inf, 1, 0)``; zero is
``(0.0, 0, 1)``.
"""

import numpy as np
from numba import njit

_MASK32 = np.uint64(0xFFFFFFFF)
_SHIFT32 = np.uint64(32)


@njit(cache=True)
def _mul128(a, b):
    a = np.uint64(a)
    b = np.uint64(b)
    a_lo = a & _MASK32
    a_hi = a >> _SHIFT32
    b_lo = b & _MASK32
    b_hi = b >> _SHIFT32
    p0 = a_lo * b_lo
    p1 = a_lo * b_hi
    p2 = a_hi * b_lo
    p3 = a_hi * b_hi
    mid = (p0 >> _SHIFT32) + (p1 & _MASK32) + (p2 & _MASK32)
    lo = (p0 & _MASK32) | (mid << _SHIFT32)
    hi = p3 + (p1 >> _SHIFT32) + (p2 >> _SHIFT32) + (mid >> _SHIFT32)
    return hi, lo


@njit(cache=True)
def less(fa, na, da, fb, nb, db):
    """Exact ``na/da < nb/db`` (den 0 means infinity)."""
    if fa < fb:
        return True
    if fa > fb:
        return False
    if da == 0 or db == 0:
        return False
    h1, l1 = _mul128(na, db)
    h2, l2 = _mul128(nb, da)
    return h1 < h2 or (h1 == h2 and l1 < l2)


@njit(cache=True)
def popcounts(k):
    n = 1 << k
    pc = np.zeros(n, dtype=np.int64)
    for s in range(1, n):
        pc[s] = pc[s >> 1] + (s & 1)
    return pc


@njit(cache=True)
def flow_table(k, up, ea, eb, ew):
    n = 1 << k
    out = np.zeros(n, dtype=np.int64)
    for s in range(n):
        tot = 0
        for i in range(k):
            if (s >> i) & 1:
                tot += up[i]
        for j in range(ea.shape[0]):
            if ((s >> ea[j]) ^ (s >> eb[j])) & 1:
                tot += ew[j]
        out[s] = tot
    return out


@njit(cache=True)
def _child_value(c, x, popx, is_leaf, leaf_slots, slot, tf, tn, td):
    if c < 0:
        if x == 0:
            return 0.0, 0, 1
        return np.inf, 1, 0
    if is_leaf[c]:
        if popx <= leaf_slots[c]:
            return 0.0, 0, 1
        return np.inf, 1, 0
    r = slot[c]
    return tf[r, x], tn[r, x], td[r, x]


@njit(cache=True)
def _edge_value(c, flow, capn, capf):
    # Congestion of the edge above child c when it carries `flow`.
    if c < 0 or capn[c] == 0 or flow == 0:
        return 0.0, 0, 1
    return flow / capf[c], flow, capn[c]


@njit(cache=True)
def _max4(f1, n1, d1, f2, n2, d2, f3, n3, d3, f4, n4, d4):
    bf, bn, bd = f1, n1, d1
    if less(bf, bn, bd, f2, n2, d2):
        bf, bn, bd = f2, n2, d2
    if less(bf, bn, bd, f3, n3, d3):
        bf, bn, bd = f3, n3, d3
    if less(bf, bn, bd, f4, n4, d4):
        bf, bn, bd = f4, n4, d4
    return bf, bn, bd


@njit(cache=True)
def subset_dp(k, flow, order, left, right, is_leaf, leaf_slots, cap_sub,
              capn, slot, part_row, n_slots, n_rows, root, prune):
    """Minimum congestion of every VM subset in every internal subtree.

    ``order`` lists internal nodes children-first, ``root`` last. Only the
    full set is evaluated at the root. Returns the value tables (indexed by
    ``slot``) and the split table (indexed by ``part_row``; -1 = no split).

    With ``prune`` False every subset and every split is evaluated. With
    ``prune`` True subsets larger than a subtree's slot count are marked
    infeasible without a split walk, and a split is abandoned as soon as
    one of its four terms fails to beat the incumbent. Both return the same
    tables, including tie-breaking.
    """
    full = (1 << k) - 1
    size = 1 << k
    pc = popcounts(k)
    capf = capn.astype(np.float64)
    tf = np.empty((n_slots, size), dtype=np.float64)
    tn = np.empty((n_slots, size), dtype=np.int64)
    td = np.empty((n_slots, size), dtype=np.int64)
    part = np.full((n_rows, size), -1, dtype=np.int64)

    for u in order:
        l = left[u]
        r = right[u]
        cap_l = cap_sub[l] if l >= 0 else 0
        cap_r = cap_sub[r] if r >= 0 else 0
        su = slot[u]
        pr = part_row[u]
        lo = full if u == root else 0
        for s in range(lo, full + 1):
            bf, bn, bd = np.inf, 1, 0
            best = -1
            if prune and pc[s] > cap_sub[u]:
                tf[su, s] = bf
                tn[su, s] = bn
                td[su, s] = bd
                continue
            sl = s
            while True:
                sr = s ^ sl
                if not prune:
                    f1, n1, d1 = _child_value(l, sl, pc[sl], is_leaf, leaf_slots, slot, tf, tn, td)
                    f2, n2, d2 = _child_value(r, sr, pc[sr], is_leaf, leaf_slots, slot, tf, tn, td)
                    f3, n3, d3 = _edge_value(l, flow[sl], capn, capf)
                    f4, n4, d4 = _edge_value(r, flow[sr], capn, capf)
                    tf_, tn_, td_ = _max4(f1, n1, d1, f2, n2, d2, f3, n3, d3, f4, n4, d4)
                    if less(tf_, tn_, td_, bf, bn, bd):
                        bf, bn, bd = tf_, tn_, td_
                        best = sl
                elif pc[sl] <= cap_l and pc[sr] <= cap_r:
                    # The split wins iff all four terms beat the incumbent;
                    # test them one at a time and keep the largest.
                    f1, n1, d1 = _child_value(l, sl, pc[sl], is_leaf, leaf_slots, slot, tf, tn, td)
                    if less(f1, n1, d1, bf, bn, bd):
                        f2, n2, d2 = _child_value(r, sr, pc[sr], is_leaf, leaf_slots, slot, tf, tn, td)
                        if less(f2, n2, d2, bf, bn, bd):
                            f3, n3, d3 = _edge_value(l, flow[sl], capn, capf)
                            if less(f3, n3, d3, bf, bn, bd):
                                f4, n4, d4 = _edge_value(r, flow[sr], capn, capf)
                                if less(f4, n4, d4, bf, bn, bd):
                                    bf, bn, bd = _max4(f1, n1, d1, f2, n2, d2,
                                                       f3, n3, d3, f4, n4, d4)
                                    best = sl
                if sl == 0:
                    break
                sl = (sl - 1) & s
            tf[su, s] = bf
            tn[su, s] = bn
            td[su, s] = bd
            part[pr, s] = best
    return tf, tn, td, part


@njit(cache=True)
def _count_child(c, z, is_leaf, leaf_slots, slot, tf, tn, td):
    if c < 0:
        if z == 0:
            return 0.0, 0, 1
        return np.inf, 1, 0
    if is_leaf[c]:
        if z <= leaf_slots[c]:
            return 0.0, 0, 1
        return np.inf, 1, 0
    r = slot[c]
    return tf[r, z], tn[r, z], td[r, z]


@njit(cache=True)
def count_dp(k, order, left, right, is_leaf, leaf_slots, capn, slot,
             part_row, n_slots, n_rows, root):
    """Minimum congestion of placing ``z`` clique VMs in each subtree.

    Split ``(i, z - i)`` loads the left edge with ``i * (k - i)`` and the
    right edge with ``(z - i) * (k - z + i)``, in units of ``B / (k - 1)``.
    """
    capf = capn.astype(np.float64)
    tf = np.empty((n_slots, k + 1), dtype=np.float64)
    tn = np.empty((n_slots, k + 1), dtype=np.int64)
    td = np.empty((n_slots, k + 1), dtype=np.int64)
    part = np.full((n_rows, k + 1), -1, dtype=np.int64)
    for u in order:
        l = left[u]
        r = right[u]
        su = slot[u]
        pr = part_row[u]
        lo = k if u == root else 0
        for z in range(lo, k + 1):
            bf, bn, bd = np.inf, 1, 0
            best = -1
            for i in range(z + 1):
                f1, n1, d1 = _count_child(l, i, is_leaf, leaf_slots, slot, tf, tn, td)
                f2, n2, d2 = _count_child(r, z - i, is_leaf, leaf_slots, slot, tf, tn, td)
                f3, n3, d3 = _edge_value(l, i * (k - i), capn, capf)
                f4, n4, d4 = _edge_value(r, (z - i) * (k - z + i), capn, capf)
                tf_, tn_, td_ = _max4(f1, n1, d1, f2, n2, d2, f3, n3, d3, f4, n4, d4)
                if less(tf_, tn_, td_, bf, bn, bd):
                    bf, bn, bd = tf_, tn_, td_
                    best = i
            tf[su, z] = bf
            tn[su, z] = bn
            td[su, z] = bd
            part[pr, z] = best
    return tf, tn, td, part


@njit(cache=True)
def tree_arrays(parent, vm_slots, root, retain):
    """Child links, post-order and table storage for a binary tree.

    ``parent[i]`` is the index of node ``i``'s parent (-1 at the root);
    children keep index order. Returns ``ok == False`` if some node has
    more than two children.
    """
    n = parent.shape[0]
    left = np.full(n, -1, dtype=np.int64)
    right = np.full(n, -1, dtype=np.int64)
    ok = True
    for i in range(n):
        p = parent[i]
        if p < 0:
            continue
        if left[p] < 0:
            left[p] = i
        elif right[p] < 0:
            right[p] = i
        else:
            ok = False
    is_leaf = np.empty(n, dtype=np.bool_)
    for i in range(n):
        is_leaf[i] = left[i] < 0 and i != root

    # Iterative post-order from the root.
    post = np.empty(n, dtype=np.int64)
    stack = np.empty(n, dtype=np.int64)
    state = np.zeros(n, dtype=np.int64)
    sp = 0
    cnt = 0
    stack[sp] = root
    sp += 1
    while sp > 0:
        u = stack[sp - 1]
        if state[u] == 0:
            state[u] = 1
            if right[u] >= 0:
                stack[sp] = right[u]
                sp += 1
            if left[u] >= 0:
                stack[sp] = left[u]
                sp += 1
        else:
            sp -= 1
            post[cnt] = u
            cnt += 1
    post = post[:cnt]

    cap_sub = vm_slots.copy()
    n_int = 0
    for u in post:
        if not is_leaf[u]:
            s = 0
            if left[u] >= 0:
                s += cap_sub[left[u]]
            if right[u] >= 0:
                s += cap_sub[right[u]]
            cap_sub[u] = s
            n_int += 1
    order = np.empty(n_int, dtype=np.int64)
    part_row = np.full(n, -1, dtype=np.int64)
    slot = np.full(n, -1, dtype=np.int64)
    free = np.empty(n_int + 1, dtype=np.int64)
    nfree = 0
    n_slots = 0
    j = 0
    for u in post:
        if is_leaf[u]:
            continue
        order[j] = u
        part_row[u] = j
        j += 1
        if retain:
            slot[u] = n_slots
            n_slots += 1
            continue
        # Reuse child storage once the parent row has its own slot.
        if nfree > 0:
            nfree -= 1
            slot[u] = free[nfree]
        else:
            slot[u] = n_slots
            n_slots += 1
        for c in (left[u], right[u]):
            if c >= 0 and not is_leaf[c]:
                free[nfree] = slot[c]
                nfree += 1
    return ok, left, right, is_leaf, cap_sub, order, slot, part_row, n_slots
