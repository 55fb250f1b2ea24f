"""Small built-in structures used in tests, docs and the fixture files.

Coordinates are exact rationals.  Where a sample is planar its faces can
be traced with planar_faces; wheel5's traced complex has 4 triangles plus
the exterior face.
"""

from __future__ import annotations

from fractions import Fraction

from .complexes import Embedding, build_complex, planar_faces
from .statics import Truss

Q = Fraction


def wheel5(with_faces: bool = False) -> Truss:
    """Hub-and-square wheel: 5 vertices, 8 edges (4 spokes, 4 rim edges).

    Carries a one-dimensional self-stress (all spokes equal, rim at -1/2
    per unit of spoke stress) and exactly the three rigid-body freedoms.
    """
    verts = [(0, 0), (1, 1), (-1, 1), (-1, -1), (1, -1)]
    spokes = [(0, 1), (0, 2), (0, 3), (0, 4)]
    rim = [(1, 2), (2, 3), (3, 4), (4, 1)]
    x = build_complex(5, spokes + rim)
    emb = Embedding.from_points(verts)
    if with_faces:
        x = planar_faces(x, emb)
    return Truss(x, emb)


def tri3() -> Truss:
    """Isostatic triangle: no self-stress, three rigid freedoms."""
    x = build_complex(3, [(0, 1), (1, 2), (2, 0)])
    return Truss(x, Embedding.from_points([(0, 0), (1, 0), (0, 1)]))


def tri3_spherical() -> Truss:
    t = tri3()
    return Truss(planar_faces(t.complex, t.embedding), t.embedding)


def collinear3() -> Truss:
    """Three collinear joints with all three members; degenerate geometry
    with an exact self-stress pattern (1, 1, -1/2)."""
    x = build_complex(3, [(0, 1), (1, 2), (0, 2)])
    return Truss(x, Embedding.from_points([(0, 0), (1, 0), (2, 0)]))


def square4(with_faces: bool = False) -> Truss:
    """Unit square cycle: one shear mechanism, no self-stress."""
    x = build_complex(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    emb = Embedding.from_points([(0, 0), (1, 0), (1, 1), (0, 1)])
    if with_faces:
        x = planar_faces(x, emb)
    return Truss(x, emb)


def single_edge(dim: int = 2) -> Truss:
    pts = [(0,) * dim, (1,) + (0,) * (dim - 1)]
    return Truss(build_complex(2, [(0, 1)]), Embedding.from_points(pts))


def loaded_triangle(with_faces: bool = True):
    """Isostatic triangle inside an exterior loading loop.

    Vertices 0-2 are the triangle (a, b, c), 3-6 the quadrilateral loop;
    three connector edges carry loads whose lines of action meet at the
    single point (2, 2), so the decomposed structure has exactly one
    degree of equilibrium.

    Returns (truss, loop_vertices, loop_edges).
    """
    pts = [
        (0, 0), (4, 0), (2, 3),            # triangle a, b, c
        (-2, -2), (6, -2), (2, 5), (-2, 5)  # loop y1, y2, y3, y4
    ]
    edges = [
        (0, 1), (1, 2), (2, 0),            # members ab, bc, ca
        (3, 4), (4, 5), (5, 6), (6, 3),    # loop cycle
        (3, 0), (4, 1), (5, 2),            # connectors y1-a, y2-b, y3-c
    ]
    x = build_complex(7, edges)
    emb = Embedding.from_points(pts)
    if with_faces:
        x = planar_faces(x, emb)
    return Truss(x, emb), (3, 4, 5, 6), (3, 4, 5, 6)
