"""Pure-Python exploration kernel (fallback for ``_cexplore``).

Markings are dense tuples indexed by place position, feature paths are
config-set bitmasks.  Both kernels share this exact signature and must
return identical results.
"""

from pnpl.errors import StateLimitExceeded, TokenLimitExceeded


def explore(m0, pre, post, tmasks, init_mask, sound, max_states, max_tokens, place_names):
    """Breadth-first fRG exploration with the conflict-detection filter.

    Returns ``(markings, masks, parents, edges, rejections, inspections)``
    where ``parents[i]`` is the ``(state, transition)`` pair of first
    arrival (``None`` for the initial state), ``edges`` holds
    ``(source, transition, target)`` state indices and ``rejections``
    the ``(state, transition)`` pairs cut by the filter.
    """
    markings = [m0]
    masks = [init_mask]
    parents = [None]
    index = {(m0, init_mask) if sound else m0: 0}
    edges = []
    rejections = []
    inspections = 0
    n_trans = len(pre)
    head = 0
    while head < len(markings):
        src = head
        head += 1
        m = markings[src]
        mask = masks[src]
        for t in range(n_trans):
            inspections += 1
            ins = pre[t]
            ok = True
            for p, w in ins:
                if m[p] < w:
                    ok = False
                    break
            if not ok:
                continue
            cand = mask & tmasks[t]
            if not cand:
                rejections.append((src, t))
                continue
            succ = list(m)
            for p, w in ins:
                succ[p] -= w
            for p, w in post[t]:
                v = succ[p] + w
                if v > max_tokens:
                    raise TokenLimitExceeded(place_names[p], v, max_tokens)
                succ[p] = v
            succ = tuple(succ)
            key = (succ, cand) if sound else succ
            dst = index.get(key)
            if dst is None:
                dst = len(markings)
                if dst >= max_states:
                    raise StateLimitExceeded(dst + 1, max_states)
                index[key] = dst
                markings.append(succ)
                masks.append(cand)
                parents.append((src, t))
            edges.append((src, t, dst))
    return markings, masks, parents, edges, rejections, inspections
