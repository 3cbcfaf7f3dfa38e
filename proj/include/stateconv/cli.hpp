#pragma once

// Command-line front end. Exit codes: 0 pass, 1 failed check, 2 input error.

#include "stateconv/adversary.hpp"

#include <iosfwd>
#include <string>

namespace stateconv::cli {

inline constexpr int kSchemaVersion = 1;

/// {"alphabet": k, "arity": n, "domain": [...], "outputs": {point: label}}
/// or per-coordinate alphabets via "alphabet symbols": [["0","1"], ["A","B","C"]].
FunctionSpec parse_function_text(const std::string& text, const std::string& source);
FunctionSpec parse_function(const std::string& path);

/// {"size": d, "entries": [[re, im], ...]} row-major.
CMatrix parse_gram_text(const std::string& text, const std::string& source);
CMatrix parse_gram(const std::string& path);
std::string gram_to_json(const CMatrix& g);

std::string sha256_hex(const std::string& data);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace stateconv::cli
