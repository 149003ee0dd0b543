#pragma once

#include <cstdint>
#include <vector>

#include "hardmatch/embedding.hpp"

// D-Wave 2X reference data for G_1 (sparse-first edge numbering).
namespace fixtures {

inline hardmatch::Embedding dw2x_g1_embedding() {
  return hardmatch::Embedding({{1040},
                               {1048},
                               {1053},
                               {1055, 1051},
                               {1041, 1045},
                               {1044, 1042, 1047},
                               {1137, 1143, 1054, 1151, 1050, 1146},
                               {1052}});
}

// Worst of the 10000 hardware runs, one value per qubit in ascending qubit
// order 1040 1041 1042 1044 1045 1047 1048 1050 1051 1052 1053 1054 1055
// 1137 1143 1146 1151.
inline std::vector<std::uint8_t> dw2x_g1_worst_sample() {
  return {1, 0, 0, 0, 0, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1};
}

}  // namespace fixtures
