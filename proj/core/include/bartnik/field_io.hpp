#pragma once

#include <string>

#include "bartnik/grid.hpp"

namespace bartnik::grid {

/// Flat binary snapshot: 16-byte header (magic "BFLD", u32 n_r, n_theta,
/// n_phi, n_comp, f64 r_max) followed by little-endian 64-bit floats in
/// node-major order.
void save_field(const Field& f, const std::string& path);
/// Load against an existing grid; throws on any header mismatch.
Field load_field(const Grid& g, const std::string& path);

/// CSV dump (one row per node: ir,itheta,iphi,x,y,z,components...) for small
/// grids and external inspection.
void save_field_csv(const Field& f, const std::string& path);

}  // namespace bartnik::grid
