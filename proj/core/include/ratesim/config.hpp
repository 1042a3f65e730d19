#pragma once

// JSON scenario configs. Two kinds:
//   "neg-bc": layered broadcast scheme (source pmf over (U,V2,V3,X), channel
//             X -> (Y1,Y2,Y3), seven rates).
//   "det-ic": deterministic interference channel (factor pmfs p(Q), p(X_l|Q),
//             deterministic tables, three rates).
// Validation failures throw ConfigError with the JSON path of the offending
// field in the message.

#include <stdexcept>
#include <string>
#include <vector>

#include "ratesim/bc.hpp"
#include "ratesim/detic.hpp"

namespace ratesim {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
  std::string kind;             // "neg-bc" or "det-ic"
  std::vector<int> n_list;      // one or more blocklengths ("n": int or array)
  long trials = 1000;
  long fresh_codebook_every = 0;  // < 1 keeps one codebook for the whole run
  long draws = 500;               // codebook draws for bin statistics
  double delta = 0.05;            // exponent slack for bin statistics
  NegSchemeConfig neg;            // populated when kind == "neg-bc"
  ICConfig ic;                    // populated when kind == "det-ic"
};

// Parses and fully validates a config; throws ConfigError (with JSON path)
// on schema or pmf violations.
ScenarioConfig parse_config(const std::string& json_text);
ScenarioConfig load_config(const std::string& path);

}  // namespace ratesim
