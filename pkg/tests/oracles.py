"""Independent oracles for the test suite.

Everything here recomputes expected values from first principles (plain
BFS, Dijkstra, closed-form counts, brute-force enumeration) without going
through the library code paths under test.
"""

from __future__ import annotations

import heapq
import itertools
from fractions import Fraction
from math import comb


def bfs_ball(identity, gens, mul, radius):
    """Plain BFS ball: {element: distance} using only a multiply callable."""
    dist = {identity: 0}
    frontier = [identity]
    for r in range(1, radius + 1):
        nxt = []
        for g in frontier:
            for s in gens:
                h = mul(g, s)
                if h not in dist:
                    dist[h] = r
                    nxt.append(h)
        frontier = nxt
    return dist


def zd_sphere_count(d: int, r: int) -> int:
    """Number of lattice points with l1 norm exactly r."""
    if r == 0:
        return 1
    return sum(2**k * comb(d, k) * comb(r - 1, k - 1) for k in range(1, min(d, r) + 1))


def free_sphere_count(rank: int, r: int) -> int:
    if r == 0:
        return 1
    return 2 * rank * (2 * rank - 1) ** (r - 1)


# --- Heisenberg via the defining 3x3 integer matrices -----------------------


def heis_matrix(a: int, b: int, c: int):
    return ((1, a, c), (0, 1, b), (0, 0, 1))


def heis_matmul(m, n):
    return tuple(
        tuple(sum(m[i][k] * n[k][j] for k in range(3)) for j in range(3)) for i in range(3)
    )


def heis_triple(m) -> tuple[int, int, int]:
    return (m[0][1], m[1][2], m[0][2])


# --- Spoke-ray space as a discretized weighted graph -------------------------


def spoke_ray_graph_distance(u, v, *, n_max: int = 14, steps: int = 8) -> Fraction:
    """Dijkstra over a rational discretization of the ray-with-spokes space.

    Vertices: hub, ray points on a 1/steps grid up to n_max + 2, spoke heads
    up to n_max, and spoke interior grid points; edges follow the defining
    segments (hub-head length 1, head-to-ray-point-n spoke of length
    n - 1/2, consecutive ray grid points).  The query points u, v are glued
    into the graph on their own segments.
    """
    h = Fraction(1, steps)
    nodes = set()
    edges: dict = {}

    def add_edge(p, q, w):
        edges.setdefault(p, []).append((q, w))
        edges.setdefault(q, []).append((p, w))
        nodes.add(p)
        nodes.add(q)

    top = (n_max + 2) * steps
    for k in range(top):
        add_edge(("ray", k * h), ("ray", (k + 1) * h), h)
    for n in range(1, n_max + 1):
        add_edge(("hub",), ("head", n), Fraction(1))
        length = Fraction(2 * n - 1, 2)
        grid = [Fraction(j) * length / (steps) for j in range(steps + 1)]
        prev = ("head", n)
        for s in grid[1:-1]:
            add_edge(prev, ("spoke", n, s), s - (prev[2] if prev[0] == "spoke" else 0))
            prev = ("spoke", n, s)
        add_edge(prev, ("ray", Fraction(n)), length - (prev[2] if prev[0] == "spoke" else 0))
    # identify hub with ray parameter 0
    add_edge(("hub",), ("ray", Fraction(0)), Fraction(0))

    def glue(p):
        tag = p[0]
        if tag in ("hub", "head"):
            return p
        if tag == "ray":
            t = p[1]
            lo = (t * steps).__floor__() * h
            node = ("ray", t)
            if node not in nodes:
                add_edge(node, ("ray", lo), t - lo)
                add_edge(node, ("ray", lo + h), lo + h - t)
            return node
        n, s = p[1], p[2]
        length = Fraction(2 * n - 1, 2)
        grid_step = length / steps
        j = (s / grid_step).__floor__()
        lo = j * grid_step
        node = ("spoke", n, s)
        if node not in nodes:
            lo_node = ("head", n) if lo == 0 else ("spoke", n, lo)
            hi = lo + grid_step
            hi_node = ("ray", Fraction(n)) if hi >= length else ("spoke", n, hi)
            add_edge(node, lo_node, s - lo)
            add_edge(node, hi_node, min(hi, length) - s)
        return node

    src = glue(u)
    dst = glue(v)
    dist = {src: Fraction(0)}
    heap = [(Fraction(0), repr(src), src)]
    while heap:
        d, _, p = heapq.heappop(heap)
        if p == dst:
            return d
        if d > dist[p]:
            continue
        for q, w in edges.get(p, []):
            nd = d + w
            if q not in dist or nd < dist[q]:
                dist[q] = nd
                heapq.heappush(heap, (nd, repr(q), q))
    raise AssertionError(f"no path between {u} and {v}")


# --- l1 sphere restriction patterns ------------------------------------------


def l1_sphere(d: int, r: int):
    """All integer vectors with l1 norm exactly r."""
    out = []
    for signs_support in itertools.product(range(-r, r + 1), repeat=d):
        if sum(abs(v) for v in signs_support) == r:
            out.append(signs_support)
    return out


def l1_restrictions(d: int, ball_r: int, sphere_r: int):
    """Deduplicated restriction patterns of h_g to the l1 ball, direct."""
    ball = sorted(
        (p for p in itertools.product(range(-ball_r, ball_r + 1), repeat=d)
         if sum(abs(v) for v in p) <= ball_r),
        key=lambda p: (sum(abs(v) for v in p), p),
    )
    patterns = set()
    for g in l1_sphere(d, sphere_r):
        patterns.add(
            tuple(sum(abs(x - y) for x, y in zip(p, g)) - sphere_r for p in ball)
        )
    return sorted(patterns)


# --- free group tree ends -----------------------------------------------------


def free_reduce(word):
    out = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def free_end_restrictions(rank: int, ball_r: int, depth: int = 24):
    """Restriction of the end through each word w with |w| = ball_r, taken
    at a deep anchor continuing w by repeating its last letter."""
    letters = [x for i in range(1, rank + 1) for x in (i, -i)]

    def ball(r):
        out = [()]
        frontier = [()]
        for _ in range(r):
            nxt = []
            for w in frontier:
                for x in letters:
                    if not w or w[-1] != -x:
                        nxt.append(w + (x,))
            out.extend(nxt)
            frontier = nxt
        return out

    ball_pts = sorted(ball(ball_r), key=lambda w: (len(w), w))
    patterns = set()
    for w in ball(ball_r):
        if len(w) != ball_r:
            continue
        g = w + (w[-1],) * depth
        glen = len(g)
        patterns.add(
            tuple(
                len(free_reduce(tuple(-x for x in reversed(p)) + g)) - glen
                for p in ball_pts
            )
        )
    return sorted(patterns)


# --- brute-force Lipschitz extensions ----------------------------------------


def integer_grid_extensions(matrix, domain, values, free_idx, grid):
    """All integer-grid assignments on free_idx extending (domain, values)
    1-Lipschitz w.r.t. the given distance matrix."""
    n = len(matrix)
    fixed = dict(zip(domain, values))
    out = []
    for combo in itertools.product(grid, repeat=len(free_idx)):
        assign = dict(fixed)
        assign.update(dict(zip(free_idx, combo)))
        ok = True
        for i in range(n):
            for j in range(i + 1, n):
                if abs(assign[i] - assign[j]) > matrix[i][j]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append([assign[i] for i in range(n)])
    return out


def random_rational_metric(rng, n: int, *, integral: bool = False):
    """Random exact metric on n points via shortest-path closure."""
    INF = Fraction(10**9)
    w = [[INF] * n for _ in range(n)]
    for i in range(n):
        w[i][i] = Fraction(0)
    for i in range(n):
        for j in range(i + 1, n):
            if integral:
                val = Fraction(rng.randrange(1, 9))
            else:
                val = Fraction(rng.randrange(1, 25), rng.randrange(1, 5))
            w[i][j] = w[j][i] = val
    for k in range(n):
        for i in range(n):
            wik = w[i][k]
            for j in range(n):
                if wik + w[k][j] < w[i][j]:
                    w[i][j] = wik + w[k][j]
    return w
