"""Compiled inner loop of the tabu search.

State layout shared by every function here:

* ``x``      -- uint8 (N, m), x[p, l] = 1 iff point p is in block l
* ``words``  -- uint64 (m, ceil(N/64)), the same blocks as bit strings
* ``table``  -- int64 (m, m), pairwise intersection counts
* ``key_term`` -- int64 (N/2 + 1,), scaled objective contribution of one pair
  as a function of its intersection count
* ``tabu_count`` -- int32 (m, N, N), multiplicity of (l, {u, w}) in the FIFO

Objective values are integer keys (objective times a fixed positive constant),
so comparisons and the stopping test are exact.
"""
import numpy as np
from llvmlite import ir
from numba import njit, types
from numba.extending import intrinsic

_NO_KEY = np.iinfo(np.int64).max


@intrinsic
def popcount64(typingctx, x):
    sig = types.uint64(types.uint64)

    def codegen(context, builder, signature, args):
        fn = builder.module.declare_intrinsic("llvm.ctpop", [ir.IntType(64)])
        return builder.call(fn, args)

    return sig, codegen


@njit(cache=True)
def intersect_words(a, b):
    total = 0
    for k in range(a.shape[0]):
        total += popcount64(a[k] & b[k])
    return total


@njit(cache=True)
def table_from_words(words):
    m = words.shape[0]
    table = np.empty((m, m), dtype=np.int64)
    for a in range(m):
        for b in range(a, m):
            c = intersect_words(words[a], words[b])
            table[a, b] = c
            table[b, a] = c
    return table


@njit(cache=True)
def total_key(table, key_term):
    m = table.shape[0]
    key = 0
    for a in range(m):
        for b in range(a + 1, m):
            key += key_term[table[a, b]]
    return key


@njit(cache=True)
def move_delta(x, table, key_term, cls, u, w):
    delta = 0
    for j in range(x.shape[1]):
        if j == cls:
            continue
        s = np.int64(x[w, j]) - np.int64(x[u, j])
        if s != 0:
            c = table[cls, j]
            delta += key_term[c + s] - key_term[c]
    return delta


@njit(cache=True)
def scan_neighborhood(x, table, key_term, tabu_count, cur_key, asp_key, rng):
    """Pick the next move over all (l, u in B_l, w not in B_l), in that order.

    Admissible means not tabu, or strictly better than ``asp_key``.  A move
    strictly below the running minimum is adopted; one equal to it replaces
    the incumbent on a fair coin.  If nothing is admissible the first
    strictly-best tabu move is taken and ``forced`` is set.

    Returns ``(cls, u, w, new_key, forced)``.
    """
    n, m = x.shape
    best_min = _NO_KEY
    have = False
    bc = bu = bw = -1
    fb_min = _NO_KEY
    fc = fu = fw = -1
    half = key_term.shape[0] - 1
    ins = np.empty(n, dtype=np.int64)
    outs = np.empty(n, dtype=np.int64)
    gain = np.empty(m, dtype=np.int64)  # change when c_lj grows by one
    loss = np.empty(m, dtype=np.int64)  # change when c_lj shrinks by one
    alpha = np.empty(m, dtype=np.int64)
    for cls in range(m):
        ni = no = 0
        for p in range(n):
            if x[p, cls]:
                ins[ni] = p
                ni += 1
            else:
                outs[no] = p
                no += 1
        for j in range(m):
            c = table[cls, j]
            gain[j] = key_term[c + 1] - key_term[c] if j != cls and c < half else 0
            loss[j] = key_term[c - 1] - key_term[c] if j != cls and c > 0 else 0
        for a in range(ni):
            u = ins[a]
            # delta(u, w) = base + sum_j x[w, j] * alpha[j]
            base = 0
            for j in range(m):
                if x[u, j]:
                    base += loss[j]
                    alpha[j] = -loss[j]
                else:
                    alpha[j] = gain[j]
            for b in range(no):
                w = outs[b]
                acc = base
                for j in range(m):
                    acc += x[w, j] * alpha[j]
                nk = cur_key + acc
                if tabu_count[cls, u, w] > 0 and not nk < asp_key:
                    if nk < fb_min:
                        fb_min = nk
                        fc, fu, fw = cls, u, w
                    continue
                if have and nk == best_min:
                    if rng.random() < 0.5:
                        bc, bu, bw = cls, u, w
                elif nk < best_min or not have:
                    bc, bu, bw = cls, u, w
                    best_min = nk
                    have = True
    if have:
        return bc, bu, bw, best_min, False
    return fc, fu, fw, fb_min, True


@njit(cache=True)
def apply_move(x, words, table, cls, u, w):
    for j in range(x.shape[1]):
        if j != cls:
            s = np.int64(x[w, j]) - np.int64(x[u, j])
            table[cls, j] += s
            table[j, cls] += s
    x[u, cls] = 0
    x[w, cls] = 1
    words[cls, u >> 6] ^= np.uint64(1) << np.uint64(u & 63)
    words[cls, w >> 6] ^= np.uint64(1) << np.uint64(w & 63)


@njit(cache=True)
def tabu_run(x, words, key_term, target_key, nitmax, tabu_len, rng, check_every):
    """Run the tabu loop from the state in ``x``/``words`` (modified in place).

    Returns ``(best_x, best_key, iterations, rbest, forced_moves, history)``
    where ``history`` rows are (iteration, best key) at each strict improvement.
    """
    n, m = x.shape
    table = table_from_words(words)
    cur_key = total_key(table, key_term)
    best_key = cur_key
    asp_key = cur_key
    best_x = x.copy()
    tabu_count = np.zeros((m, n, n), dtype=np.int32)
    ring = np.empty((tabu_len + 1, 3), dtype=np.int64)
    head = 0
    size = 0
    forced_moves = 0
    history = np.empty((16, 2), dtype=np.int64)
    n_hist = 0
    r = 1
    rbest = 1
    while r - rbest <= nitmax and best_key > target_key:
        cls, u, w, new_key, forced = scan_neighborhood(x, table, key_term, tabu_count,
                                                       cur_key, asp_key, rng)
        if forced:
            forced_moves += 1
        apply_move(x, words, table, cls, u, w)
        cur_key = new_key
        if new_key < best_key:
            best_key = new_key
            asp_key = new_key
            rbest = r
            best_x[:, :] = x
            if n_hist == history.shape[0]:
                grown = np.empty((2 * n_hist, 2), dtype=np.int64)
                grown[:n_hist] = history
                history = grown
            history[n_hist, 0] = r
            history[n_hist, 1] = new_key
            n_hist += 1
        # the reverse move swaps the same unordered pair back
        tabu_count[cls, u, w] += 1
        tabu_count[cls, w, u] += 1
        ring[(head + size) % (tabu_len + 1)] = (cls, u, w)
        size += 1
        if size > tabu_len:
            oc, ou, ow = ring[head]
            tabu_count[oc, ou, ow] -= 1
            tabu_count[oc, ow, ou] -= 1
            head = (head + 1) % (tabu_len + 1)
            size -= 1
        if check_every > 0 and r % check_every == 0:
            fresh = table_from_words(words)
            for a in range(m):
                for b in range(m):
                    if fresh[a, b] != table[a, b]:
                        raise RuntimeError("cached intersection table diverged from the blocks")
            if total_key(fresh, key_term) != cur_key:
                raise RuntimeError("cached objective diverged from the blocks")
        r += 1
    return best_x, best_key, r - 1, rbest, forced_moves, history[:n_hist].copy()
