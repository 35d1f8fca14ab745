#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bst/jsa.hpp"
#include "bst/tofs.hpp"

namespace bst {

/// Everything a pipeline run needs, loadable from one JSON document.
struct PipelineConfig {
  StateConfig state;
  struct Grid {
    double center = 1550.0;  // nm
    double span = 36.0;      // nm
    int n = 512;
  } grid;
  TofsConfig tofs;
  struct Hom {
    double delay_min = -8.0;  // ps
    double delay_max = 8.0;   // ps
    int points = 161;
    std::vector<double> phis{0.0, 1.5707963267948966, 3.141592653589793,
                             4.71238898038469};
  } hom;
  struct MonteCarlo {
    int rounds = 1000;
    std::uint64_t seed = 1;
  } mc;
  std::string output_dir = "out";

  FrequencyGrid make_frequency_grid() const;
  void validate() const;
};

/// Parses a JSON config; errors carry the offending field path (or the
/// line number, for malformed JSON).
PipelineConfig load_pipeline_config(const std::string& path);

}  // namespace bst
