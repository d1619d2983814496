#pragma once

#include <string>

#include "bizeta/lie_lattice.hpp"

namespace bizeta::testing {

inline std::string corpus(const std::string &name) { return std::string(BIZETA_CORPUS_DIR) + "/" + name; }
inline LieLattice corpus_lattice(const std::string &name) { return load_lattice(corpus(name + ".json")); }

}  // namespace bizeta::testing
