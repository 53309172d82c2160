#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "jsr/chains.hpp"
#include "jsr/matrix_set.hpp"
#include "jsr/radius.hpp"

namespace jsr {

/// splitmix64: state += 0x9E3779B97F4A7C15, then the standard finaliser.
/// uniform() takes the top 53 bits, giving a double in [0, 1).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double uniform();
  /// Integer in [lo, hi].
  int uniform_int(int lo, int hi);

 private:
  std::uint64_t state_;
};

struct GeneratorParams {
  Index dim = 3;
  std::size_t set_count = 2;
  std::size_t set_size = 2;
  double density = 1.0;
  double entry_scale = 1.0;
  std::uint64_t seed = 0;
};

/// Entries in set, member, row-major order. For each entry one draw u1
/// decides zero (u1 >= density); a nonzero entry takes a second draw u2 and
/// becomes entry_scale * (1 - u2), which lies in (0, entry_scale].
std::vector<MatrixSet> generate_instance(const GeneratorParams& p);

struct Instance {
  std::vector<MatrixSet> sets;
  nlohmann::ordered_json metadata = nlohmann::ordered_json::object();
};

/// Parses {"dim": N, "sets": [{"name": s, "matrices": [[[..],..],..]}],
/// "metadata": {..}}. Errors carry the line and column of the offending token.
Instance parse_instance_file(std::string_view text);
std::vector<MatrixSet> parse_instance(std::string_view text);

/// Decimal with 17 significant digits, so parse(serialize(x)) == x bit-exactly.
std::string serialize_instance(const std::vector<MatrixSet>& sets,
                               const nlohmann::ordered_json& metadata = nlohmann::ordered_json::object());

nlohmann::ordered_json generator_metadata(const GeneratorParams& p);

nlohmann::ordered_json to_json(const RadiusBracket& b);
nlohmann::ordered_json to_json(const ChainReport& r);
std::string report_json(const ChainReport& r);

/// Columns m, lower_m, upper_m, lower_envelope, upper_envelope.
std::string gelfand_csv(const GelfandSequence& g);
/// Columns n, members, lower, upper.
std::string symmetrization_csv(const SymmetrizationSequence& s);

std::string format_double(double x);

}  // namespace jsr
