"""Field statistics, cross-method comparison, and legacy VTK export."""

import numpy as np


def field_stats(sol):
    """Per-node mean and standard deviation of a solution chaos field.

    mean = coefficient row 0; std = sqrt(sum_{j>=1} c_j^2 <psi_j^2>),
    using the analytic basis variances.
    """
    if sol.kind != "solution":
        raise ValueError("statistics are defined for solution-tagged fields")
    mean = sol.coeffs[0].copy()
    variances = sol.basis.variances[1:, None]
    std = np.sqrt(np.sum(sol.coeffs[1:] ** 2 * variances, axis=0))
    return mean, std


def _rel_l2(diff, reference):
    num = float(np.linalg.norm(diff))
    den = float(np.linalg.norm(reference))
    return num / den if den > 0.0 else num


def compare_fields(a, b):
    """Machine-readable difference report for two fields on the same mesh/basis.

    Raises on mismatched shapes, node coordinates, or basis; returns a dict
    with per-coefficient relative L2 differences and mean/std differences.
    """
    if a.basis != b.basis:
        raise ValueError("fields use different chaos bases (dimension, order or term order)")
    if a.coeffs.shape != b.coeffs.shape:
        raise ValueError(f"coefficient shapes differ: {a.coeffs.shape} vs {b.coeffs.shape}")
    if not np.allclose(a.nodes, b.nodes, atol=1e-12, rtol=0.0):
        raise ValueError("fields are defined on different node sets")
    per_coeff = [_rel_l2(a.coeffs[j] - b.coeffs[j], a.coeffs[j]) for j in range(len(a.basis))]
    report = {
        "n_nodes": int(a.n_nodes),
        "n_terms": int(len(a.basis)),
        "coeff_rel_l2": per_coeff,
        "max_abs_diff": float(np.max(np.abs(a.coeffs - b.coeffs))),
    }
    if a.kind == "solution" and b.kind == "solution":
        mean_a, std_a = field_stats(a)
        mean_b, std_b = field_stats(b)
        report["mean_rel_l2"] = _rel_l2(mean_a - mean_b, mean_a)
        report["std_rel_l2"] = _rel_l2(std_a - std_b, std_a)
    return report


def export_vtk(mesh, fields, path, title="ssfem fields"):
    """Write mesh and nodal scalar fields as legacy ASCII VTK (unstructured grid).

    `fields` is a sequence of (name, values) pairs; each value array must
    have one entry per mesh node.  Field blocks appear in the given order.
    """
    fields = list(fields)
    for name, values in fields:
        if np.asarray(values).shape != (mesh.n_nodes,):
            raise ValueError(
                f"field {name!r} has {np.size(values)} values for {mesh.n_nodes} nodes"
            )
    with open(path, "w") as fh:
        fh.write("# vtk DataFile Version 3.0\n")
        fh.write(f"{title}\n")
        fh.write("ASCII\n")
        fh.write("DATASET UNSTRUCTURED_GRID\n")
        fh.write(f"POINTS {mesh.n_nodes} double\n")
        for x, y in mesh.nodes:
            fh.write(f"{x:.15g} {y:.15g} 0\n")
        fh.write(f"CELLS {mesh.n_triangles} {4 * mesh.n_triangles}\n")
        for i, j, k in mesh.triangles:
            fh.write(f"3 {i} {j} {k}\n")
        fh.write(f"CELL_TYPES {mesh.n_triangles}\n")
        for _ in range(mesh.n_triangles):
            fh.write("5\n")
        fh.write(f"POINT_DATA {mesh.n_nodes}\n")
        for name, values in fields:
            safe = "_".join(str(name).split())
            fh.write(f"SCALARS {safe} double 1\n")
            fh.write("LOOKUP_TABLE default\n")
            for v in np.asarray(values, dtype=float):
                fh.write(f"{v:.15g}\n")
