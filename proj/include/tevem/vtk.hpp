// Copyright (c) 2026 The tevem authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>

#include "tevem/eigensolve.hpp"

namespace tevem {

// Legacy ASCII unstructured-grid file with polygon cells. The virtual
// eigenfunction is not point-evaluable inside elements, so the scalar fields
// carry its computable P2 projection: per-point values average the projections
// of the incident cells at the vertex, per-cell values evaluate at the
// centroid. Fields: u_re, u_im, phi_re, phi_im.
void write_vtk_eigenfunction(const PolygonalMesh& mesh, const MeshGeometry& geo,
                             const DofMap& dof_map, const Eigen::VectorXcd& x,
                             const std::filesystem::path& path);

} // namespace tevem
