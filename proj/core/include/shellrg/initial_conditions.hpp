#pragma once

#include <string>

#include "shellrg/model.hpp"

namespace shellrg {

enum class BuiltinIc { IC1, IC2 };

BuiltinIc icFromName(const std::string& name);

/// Builtin initial conditions. Real models:
///   IC1: a_n = 2^{-k_n} = 2^{-2^n}   (regular, super-exponential decay)
///   IC2: a_n = k_n^{-1/4} (2 - sin n) (rough, power-law)
/// Sabra keeps the modulus rules 2^{-2^n} resp. k_n^{-1/4} and multiplies by
/// the phase factor e^{i sqrt(n)}.
ShellState builtinIc(BuiltinIc name, const ModelSpec& model, int shells);

} // namespace shellrg
