#pragma once

// Desk-scale experiment presets (fig1..fig9). Each preset runs a documented
// sweep or trajectory study and writes plot-ready CSV files (one x column,
// one y column per curve) plus a manifest with the seed, the scenario hash
// and the produced file list. Scale < 1 shrinks users, subcarriers and
// replications proportionally for quick CI runs.

#include <cstdint>
#include <string>
#include <vector>

namespace cogpow {

struct FigureOutput {
  std::vector<std::string> files;  // paths written, manifest last
};

std::vector<std::string> figure_presets();

FigureOutput reproduce_figure(const std::string& preset, const std::string& out_dir,
                              std::uint64_t seed, double scale = 1.0);

}  // namespace cogpow
