#include "panos/sim/terrain.hpp"

#include <stdexcept>

namespace panos::sim {

const char* terrain_class_name(TerrainClass c) {
  switch (c) {
    case TerrainClass::Concrete: return "concrete";
    case TerrainClass::Grass: return "grass";
    case TerrainClass::Gravel: return "gravel";
    case TerrainClass::PebbleSidewalk: return "pebble";
  }
  throw std::invalid_argument("unknown terrain class");
}

TerrainClass terrain_class_from_name(const std::string& name) {
  if (name == "concrete") return TerrainClass::Concrete;
  if (name == "grass") return TerrainClass::Grass;
  if (name == "gravel") return TerrainClass::Gravel;
  if (name == "pebble") return TerrainClass::PebbleSidewalk;
  throw std::invalid_argument("unknown terrain class: " + name);
}

TerrainSpec make_terrain(TerrainClass cls, std::uint64_t seed) {
  TerrainSpec t;
  t.terrain_class = cls;
  t.visual_seed = seed;
  switch (cls) {
    case TerrainClass::Concrete:
      t.friction_coeff = 0.85; t.roughness = 0.002; t.compliance = 0.05; break;
    case TerrainClass::Grass:
      t.friction_coeff = 0.65; t.roughness = 0.008; t.compliance = 0.40; break;
    case TerrainClass::Gravel:
      t.friction_coeff = 0.45; t.roughness = 0.020; t.compliance = 0.30; break;
    case TerrainClass::PebbleSidewalk:
      t.friction_coeff = 0.55; t.roughness = 0.012; t.compliance = 0.15; break;
  }
  return t;
}

void validate(const TerrainSpec& t) {
  if (!(t.friction_coeff > 0.0 && t.friction_coeff <= 1.0))
    throw std::invalid_argument("friction_coeff must be in (0,1]");
  if (!(t.roughness >= 0.0))
    throw std::invalid_argument("roughness must be >= 0");
  if (!(t.compliance >= 0.0 && t.compliance <= 1.0))
    throw std::invalid_argument("compliance must be in [0,1]");
}

}  // namespace panos::sim
