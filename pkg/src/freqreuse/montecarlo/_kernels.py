"""Numba kernels: uniform-grid neighbour search, Voronoi cell areas, lazy SIR tests.

All kernels take the BS coordinates of a single realization sorted by
distance from the typical UE at the origin, so index 0 is the serving BS.
"""

import math

import numpy as np
from numba import njit

_POLY_CAP = 1024


@njit(cache=True)
def build_grid(x, y, half_width, target_per_cell):
    n = x.size
    side = max(1, int(math.sqrt(n / target_per_cell)))
    size = 2.0 * half_width / side
    cell_of = np.empty(n, dtype=np.int64)
    counts = np.zeros(side * side + 1, dtype=np.int64)
    for i in range(n):
        ix = min(side - 1, max(0, int((x[i] + half_width) / size)))
        iy = min(side - 1, max(0, int((y[i] + half_width) / size)))
        c = iy * side + ix
        cell_of[i] = c
        counts[c + 1] += 1
    start = np.cumsum(counts)
    fill = start[:-1].copy()
    items = np.empty(n, dtype=np.int64)
    for i in range(n):
        c = cell_of[i]
        items[fill[c]] = i
        fill[c] += 1
    return side, size, start, items, cell_of


@njit(cache=True)
def nn_dist2(j, x, y, side, size, start, items, cell_of):
    """Squared distance from point j to its nearest other point (inf if alone)."""
    cj = cell_of[j]
    cx = cj % side
    cy = cj // side
    best = np.inf
    k = 0
    while k <= side:
        for gy in range(cy - k, cy + k + 1):
            if gy < 0 or gy >= side:
                continue
            ring_row = gy == cy - k or gy == cy + k
            for gx in range(cx - k, cx + k + 1):
                if gx < 0 or gx >= side:
                    continue
                if not ring_row and gx != cx - k and gx != cx + k:
                    continue
                c = gy * side + gx
                for p in range(start[c], start[c + 1]):
                    i = items[p]
                    if i == j:
                        continue
                    dx = x[i] - x[j]
                    dy = y[i] - y[j]
                    d2 = dx * dx + dy * dy
                    if d2 < best:
                        best = d2
        reach = k * size
        if best <= reach * reach:
            break
        k += 1
    return best


@njit(cache=True)
def _clip(px, py, nv, qx, qy, ax, ay, ox, oy):
    """Clip polygon (px, py) to the half-plane ``(p - a) . o <= 0``.

    ``a = (ax, ay)`` is the midpoint between the cell's BS and a neighbour and
    ``o = (ox, oy)`` points from the BS to that neighbour, so the kept side is
    the BS side of their bisector.  Writes to (qx, qy), returns the vertex count.
    """
    m = 0
    for i in range(nv):
        i2 = i + 1 if i + 1 < nv else 0
        sx, sy = px[i], py[i]
        ex, ey = px[i2], py[i2]
        fs = (sx - ax) * ox + (sy - ay) * oy
        fe = (ex - ax) * ox + (ey - ay) * oy
        if fs <= 0.0:
            qx[m] = sx
            qy[m] = sy
            m += 1
        if (fs <= 0.0) != (fe <= 0.0):
            s = fs / (fs - fe)
            qx[m] = sx + s * (ex - sx)
            qy[m] = sy + s * (ey - sy)
            m += 1
        if m >= _POLY_CAP - 2:
            raise RuntimeError("Voronoi polygon buffer overflow")
    return m


@njit(cache=True)
def cell_area(j, x, y, side, size, start, items, cell_of, wx, wy):
    """Area of BS j's Voronoi cell intersected with the window polygon (wx, wy).

    Neighbours are scanned ring by ring; the scan stops once twice the cell's
    circumradius about BS j is within the fully searched radius, after which
    no unseen point can cut the cell.
    """
    bx, by = x[j], y[j]
    ax_ = np.empty(_POLY_CAP)
    ay_ = np.empty(_POLY_CAP)
    bx_ = np.empty(_POLY_CAP)
    by_ = np.empty(_POLY_CAP)
    nv = wx.size
    for i in range(nv):
        ax_[i] = wx[i]
        ay_[i] = wy[i]
    rho2 = 0.0
    for i in range(nv):
        d2 = (ax_[i] - bx) ** 2 + (ay_[i] - by) ** 2
        if d2 > rho2:
            rho2 = d2
    cj = cell_of[j]
    cx = cj % side
    cy = cj // side
    cur_is_a = True
    k = 0
    while k <= side:
        for gy in range(cy - k, cy + k + 1):
            if gy < 0 or gy >= side:
                continue
            ring_row = gy == cy - k or gy == cy + k
            for gx in range(cx - k, cx + k + 1):
                if gx < 0 or gx >= side:
                    continue
                if not ring_row and gx != cx - k and gx != cx + k:
                    continue
                c = gy * side + gx
                for p in range(start[c], start[c + 1]):
                    i = items[p]
                    if i == j:
                        continue
                    ox = x[i] - bx
                    oy = y[i] - by
                    d2 = ox * ox + oy * oy
                    if 0.25 * d2 >= rho2:
                        continue
                    mx = 0.5 * (x[i] + bx)
                    my = 0.5 * (y[i] + by)
                    if cur_is_a:
                        nv = _clip(ax_, ay_, nv, bx_, by_, mx, my, ox, oy)
                        px, py = bx_, by_
                    else:
                        nv = _clip(bx_, by_, nv, ax_, ay_, mx, my, ox, oy)
                        px, py = ax_, ay_
                    cur_is_a = not cur_is_a
                    rho2 = 0.0
                    for v in range(nv):
                        dd = (px[v] - bx) ** 2 + (py[v] - by) ** 2
                        if dd > rho2:
                            rho2 = dd
        reach = k * size
        if 4.0 * rho2 <= reach * reach:
            break
        k += 1
    if cur_is_a:
        px, py = ax_, ay_
    else:
        px, py = bx_, by_
    area = 0.0
    for i in range(nv):
        i2 = i + 1 if i + 1 < nv else 0
        area += px[i] * py[i2] - px[i2] * py[i]
    return 0.5 * abs(area)


@njit(cache=True)
def _is_active(j, u, lam_ch, x, y, side, size, start, items, cell_of, wx, wy, stats):
    """Bernoulli(1 - exp(-lam_ch |V_j|)) realised by the uniform ``u``.

    The disc of radius half the nearest-neighbour distance lies inside the
    cell, which settles most draws without computing the polygon.
    """
    d2 = nn_dist2(j, x, y, side, size, start, items, cell_of)
    if u >= math.exp(-lam_ch * math.pi * 0.25 * d2):
        stats[0] += 1
        return True
    stats[1] += 1
    area = cell_area(j, x, y, side, size, start, items, cell_of, wx, wy)
    return u >= math.exp(-lam_ch * area)


@njit(cache=True)
def coverage_trial(x, y, r, h, u_act, ch, match_channel, lam_ch, alpha, thr, half_width,
                   wx, wy, covered, stats):
    """Coverage indicators of the typical UE at every threshold in ``thr`` (ascending).

    Interferers are candidates j >= 1 (channel-matched to BS 0's channel when
    ``match_channel``) whose cell holds at least one UE on the typical channel.
    Activity is resolved nearest-first only while some threshold remains
    undecided by the bracket [known active, known active + unresolved].
    Returns True when the interference is exactly zero.
    """
    n = x.size
    s = h[0] * r[0] ** (-alpha)
    contrib = np.zeros(n)
    for j in range(1, n):
        if match_channel and ch[j] != ch[0]:
            continue
        contrib[j] = h[j] * r[j] ** (-alpha)
    tail = np.zeros(n + 1)
    for j in range(n - 1, 0, -1):
        tail[j] = tail[j + 1] + contrib[j]
    nthr = thr.size
    grid_ready = False
    side = 1
    size = 1.0
    start = np.zeros(2, dtype=np.int64)
    items = np.zeros(1, dtype=np.int64)
    cell_of = np.zeros(1, dtype=np.int64)
    known = 0.0
    j = 1
    while j < n:
        pending = tail[j]
        if pending == 0.0:
            break
        if known > 0.0:
            undecided = False
            for k in range(nthr):
                t = thr[k]
                if s >= t * known and s < t * (known + pending):
                    undecided = True
                    break
            if not undecided:
                break
        if contrib[j] == 0.0:
            j += 1
            continue
        if not grid_ready:
            side, size, start, items, cell_of = build_grid(x, y, half_width, 2.0)
            grid_ready = True
        if _is_active(j, u_act[j], lam_ch, x, y, side, size, start, items, cell_of, wx, wy, stats):
            known += contrib[j]
        j += 1
    for k in range(nthr):
        covered[k] = s >= thr[k] * known
    return known == 0.0 and (j >= n or tail[j] == 0.0)


@njit(cache=True)
def serving_cell_area(x, y, half_width, wx, wy):
    side, size, start, items, cell_of = build_grid(x, y, half_width, 2.0)
    return cell_area(0, x, y, side, size, start, items, cell_of, wx, wy)


@njit(cache=True)
def occupancy_trial(x, y, r, u_act, lam_serv, inner_radius, half_width, wx, wy, stats):
    """(occupied, counted) BSs inside ``inner_radius`` for UE load ``lam_serv``."""
    n = x.size
    side, size, start, items, cell_of = build_grid(x, y, half_width, 2.0)
    occupied = 0
    counted = 0
    for j in range(n):
        if r[j] >= inner_radius:
            break
        counted += 1
        if _is_active(j, u_act[j], lam_serv, x, y, side, size, start, items, cell_of, wx, wy, stats):
            occupied += 1
    return occupied, counted


@njit(cache=True)
def all_cell_areas(x, y, half_width, wx, wy):
    side, size, start, items, cell_of = build_grid(x, y, half_width, 2.0)
    out = np.empty(x.size)
    for j in range(x.size):
        out[j] = cell_area(j, x, y, side, size, start, items, cell_of, wx, wy)
    return out
