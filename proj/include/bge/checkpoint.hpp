#pragma once

#include <string>

#include "bge/train.hpp"

namespace bge {

// Versioned JSON checkpoint holding the model spec, channel statistics, the
// compiled dual graph, and every parameter tensor. Doubles round-trip
// bit-exactly, so a reloaded model reproduces forward outputs exactly.
void save_checkpoint(const std::string& path, const Model& m);
Model load_checkpoint(const std::string& path);

}  // namespace bge
