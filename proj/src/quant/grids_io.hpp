#pragma once

#include <string>

#include "quant/grids.hpp"

namespace pdmpstop {

inline constexpr int kGridsSchemaVersion = 1;

std::string grids_to_json(const QuantizationGridSet& grids);
QuantizationGridSet grids_from_json(const std::string& text);

void save_grids(const QuantizationGridSet& grids, const std::string& path);
QuantizationGridSet load_grids(const std::string& path);

}  // namespace pdmpstop
