# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled exploration kernel; same contract as ``pnpl._explore.explore``."""

from libc.stdlib cimport malloc, free

from pnpl.errors import StateLimitExceeded, TokenLimitExceeded


def explore(tuple m0, list pre, list post, list tmasks, init_mask, bint sound,
            Py_ssize_t max_states, long max_tokens, place_names):
    cdef Py_ssize_t n_places = len(m0)
    cdef Py_ssize_t n_trans = len(pre)
    cdef Py_ssize_t t, k, p, src, dst, head = 0, n_in, n_out
    cdef long w, v
    cdef long long inspections = 0
    cdef bint ok
    cdef int *cur = <int *> malloc(max(n_places, 1) * sizeof(int))
    cdef int *nxt = <int *> malloc(max(n_places, 1) * sizeof(int))
    cdef int *pre_off = <int *> malloc((n_trans + 1) * sizeof(int))
    cdef int *post_off = <int *> malloc((n_trans + 1) * sizeof(int))
    cdef Py_ssize_t total_pre = sum(len(x) for x in pre)
    cdef Py_ssize_t total_post = sum(len(x) for x in post)
    cdef int *pre_p = <int *> malloc(max(total_pre, 1) * sizeof(int))
    cdef int *pre_w = <int *> malloc(max(total_pre, 1) * sizeof(int))
    cdef int *post_p = <int *> malloc(max(total_post, 1) * sizeof(int))
    cdef int *post_w = <int *> malloc(max(total_post, 1) * sizeof(int))
    if not (cur and nxt and pre_off and post_off and pre_p and pre_w and post_p and post_w):
        free(cur); free(nxt); free(pre_off); free(post_off)
        free(pre_p); free(pre_w); free(post_p); free(post_w)
        raise MemoryError()

    cdef list markings = [m0]
    cdef list masks = [init_mask]
    cdef list parents = [None]
    cdef dict index = {((m0, init_mask) if sound else m0): 0}
    cdef list edges = []
    cdef list rejections = []
    cdef tuple m, succ
    cdef object mask, cand, key, found

    try:
        k = 0
        for t in range(n_trans):
            pre_off[t] = k
            for pw in pre[t]:
                pre_p[k] = pw[0]
                pre_w[k] = pw[1]
                k += 1
        pre_off[n_trans] = k
        k = 0
        for t in range(n_trans):
            post_off[t] = k
            for pw in post[t]:
                post_p[k] = pw[0]
                post_w[k] = pw[1]
                k += 1
        post_off[n_trans] = k

        while head < len(markings):
            src = head
            head += 1
            m = markings[src]
            mask = masks[src]
            for p in range(n_places):
                cur[p] = m[p]
            for t in range(n_trans):
                inspections += 1
                ok = True
                for k in range(pre_off[t], pre_off[t + 1]):
                    if cur[pre_p[k]] < pre_w[k]:
                        ok = False
                        break
                if not ok:
                    continue
                cand = mask & tmasks[t]
                if not cand:
                    rejections.append((src, t))
                    continue
                for p in range(n_places):
                    nxt[p] = cur[p]
                for k in range(pre_off[t], pre_off[t + 1]):
                    nxt[pre_p[k]] -= pre_w[k]
                for k in range(post_off[t], post_off[t + 1]):
                    v = nxt[post_p[k]] + post_w[k]
                    if v > max_tokens:
                        raise TokenLimitExceeded(place_names[post_p[k]], v, max_tokens)
                    nxt[post_p[k]] = <int> v
                succ = tuple([nxt[p] for p in range(n_places)])
                key = (succ, cand) if sound else succ
                found = index.get(key)
                if found is None:
                    dst = len(markings)
                    if dst >= max_states:
                        raise StateLimitExceeded(dst + 1, max_states)
                    index[key] = dst
                    markings.append(succ)
                    masks.append(cand)
                    parents.append((src, t))
                else:
                    dst = found
                edges.append((src, t, dst))
    finally:
        free(cur); free(nxt); free(pre_off); free(post_off)
        free(pre_p); free(pre_w); free(post_p); free(post_w)
    return markings, masks, parents, edges, rejections, inspections
