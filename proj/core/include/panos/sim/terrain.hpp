#pragma once

#include <cstdint>
#include <string>

namespace panos::sim {

enum class TerrainClass { Concrete = 0, Grass = 1, Gravel = 2, PebbleSidewalk = 3 };

const char* terrain_class_name(TerrainClass c);
TerrainClass terrain_class_from_name(const std::string& name);

/// Parameterized terrain patch. friction_coeff in (0,1], roughness is the
/// surface height standard deviation in meters, compliance in [0,1].
struct TerrainSpec {
  TerrainClass terrain_class = TerrainClass::Concrete;
  double friction_coeff = 0.85;
  double roughness = 0.002;
  double compliance = 0.05;
  std::uint64_t visual_seed = 0;
};

/// Default parameter row for a terrain class, with the given visual seed.
TerrainSpec make_terrain(TerrainClass cls, std::uint64_t seed);

void validate(const TerrainSpec& t);

}  // namespace panos::sim
