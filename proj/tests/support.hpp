#pragma once

#include <string>

#include "plr/pipeline.hpp"

#ifndef PLR_DATA_DIR
#error "PLR_DATA_DIR must point at the fixture directory"
#endif

namespace testing_support {

inline std::string data_path(const std::string& name) { return std::string(PLR_DATA_DIR) + "/" + name; }

inline plr::CompiledGrammar fixture(const std::string& name) {
  return plr::compile_grammar(plr::read_file(data_path(name)));
}

inline const char* const kFixtures[] = {"catalan.g",          "expr.g",    "rr.g",   "agreement.g",
                                        "agreement_relaxed.g", "commas.g", "tags.g"};

}  // namespace testing_support
