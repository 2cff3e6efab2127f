"""Triangulated unit-square meshes: structured generation, text I/O, validation."""

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import MeshFormatError


@dataclass(frozen=True)
class TriMesh:
    """Triangulation of (a subset of) the unit square.

    `nodes` is (n_nodes, 2), `triangles` (n_tris, 3) with counter-clockwise
    vertex order, `boundary_nodes` the sorted indices of nodes on edges
    shared by exactly one triangle.
    """

    nodes: np.ndarray
    triangles: np.ndarray
    boundary_nodes: np.ndarray

    @property
    def n_nodes(self):
        return self.nodes.shape[0]

    @property
    def n_triangles(self):
        return self.triangles.shape[0]

    def signed_areas(self):
        p = self.nodes
        t = self.triangles
        d1 = p[t[:, 1]] - p[t[:, 0]]
        d2 = p[t[:, 2]] - p[t[:, 0]]
        return 0.5 * (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])


def _boundary_nodes(triangles):
    edges = {}
    for tri in triangles:
        for a, b in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])):
            key = (min(a, b), max(a, b))
            edges[key] = edges.get(key, 0) + 1
    on_boundary = sorted({v for edge, count in edges.items() if count == 1 for v in edge})
    return np.array(on_boundary, dtype=int)


def structured_mesh(nx, ny):
    """Uniform triangulation of [0,1]^2: (nx+1)(ny+1) nodes, 2*nx*ny triangles.

    Each grid cell is split along its up-right diagonal; all triangles are
    counter-clockwise.
    """
    if nx < 1 or ny < 1:
        raise ValueError(f"need nx, ny >= 1, got ({nx}, {ny})")
    xs = np.linspace(0.0, 1.0, nx + 1)
    ys = np.linspace(0.0, 1.0, ny + 1)
    gx, gy = np.meshgrid(xs, ys, indexing="xy")
    nodes = np.column_stack([gx.ravel(), gy.ravel()])

    def nid(i, j):
        return j * (nx + 1) + i

    triangles = []
    for j in range(ny):
        for i in range(nx):
            bl, br = nid(i, j), nid(i + 1, j)
            tr, tl = nid(i + 1, j + 1), nid(i, j + 1)
            triangles.append((bl, br, tr))
            triangles.append((bl, tr, tl))
    triangles = np.array(triangles, dtype=int)
    return TriMesh(nodes, triangles, _boundary_nodes(triangles))


def save_mesh(mesh, path):
    """Write the text format: "N M" line, N node lines "x y", M triangle lines."""
    with open(path, "w") as fh:
        fh.write(f"{mesh.n_nodes} {mesh.n_triangles}\n")
        for x, y in mesh.nodes:
            fh.write(f"{x:.17g} {y:.17g}\n")
        for i, j, k in mesh.triangles:
            fh.write(f"{i} {j} {k}\n")


def load_mesh(path):
    """Read the text format; validates counts, indices and orientation.

    Clockwise triangles are reoriented with a warning; degenerate triangles
    and out-of-range node indices raise MeshFormatError naming the line.
    """
    entries = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if line:
                entries.append((lineno, line))
    if not entries:
        raise MeshFormatError(f"{path}: empty mesh file")
    lineno, head = entries[0]
    parts = head.split()
    if len(parts) != 2:
        raise MeshFormatError(f"{path}:{lineno}: expected 'n_nodes n_triangles', got {head!r}")
    try:
        n_nodes, n_tris = int(parts[0]), int(parts[1])
    except ValueError:
        raise MeshFormatError(f"{path}:{lineno}: non-integer counts in {head!r}")
    if len(entries) != 1 + n_nodes + n_tris:
        raise MeshFormatError(
            f"{path}: expected {1 + n_nodes + n_tris} data lines, found {len(entries)}"
        )
    nodes = np.empty((n_nodes, 2))
    for row, (lineno, line) in enumerate(entries[1 : 1 + n_nodes]):
        parts = line.split()
        if len(parts) != 2:
            raise MeshFormatError(f"{path}:{lineno}: expected 'x y', got {line!r}")
        try:
            nodes[row] = (float(parts[0]), float(parts[1]))
        except ValueError:
            raise MeshFormatError(f"{path}:{lineno}: non-numeric coordinate in {line!r}")
        if np.any(nodes[row] < -1e-9) or np.any(nodes[row] > 1.0 + 1e-9):
            raise MeshFormatError(
                f"{path}:{lineno}: node {row} at ({parts[0]}, {parts[1]}) "
                "lies outside the unit square"
            )
    triangles = np.empty((n_tris, 3), dtype=int)
    for row, (lineno, line) in enumerate(entries[1 + n_nodes :]):
        parts = line.split()
        if len(parts) != 3:
            raise MeshFormatError(f"{path}:{lineno}: expected 'i j k', got {line!r}")
        try:
            tri = tuple(int(p) for p in parts)
        except ValueError:
            raise MeshFormatError(f"{path}:{lineno}: non-integer node index in {line!r}")
        for v in tri:
            if not 0 <= v < n_nodes:
                raise MeshFormatError(
                    f"{path}:{lineno}: triangle {row} references node {v} "
                    f"but only {n_nodes} nodes are defined"
                )
        d1 = nodes[tri[1]] - nodes[tri[0]]
        d2 = nodes[tri[2]] - nodes[tri[0]]
        area2 = d1[0] * d2[1] - d1[1] * d2[0]
        if area2 == 0.0:
            raise MeshFormatError(f"{path}:{lineno}: degenerate triangle {tri}")
        if area2 < 0.0:
            warnings.warn(f"{path}:{lineno}: reorienting clockwise triangle {tri}")
            tri = (tri[0], tri[2], tri[1])
        triangles[row] = tri
    return TriMesh(nodes, triangles, _boundary_nodes(triangles))
