#pragma once

#include <string>
#include <string_view>

#include "suropt/gibbs.hpp"

namespace suropt {

/// Flat draws CSV: one `#`-prefixed metadata line carrying the covariate
/// scale and coding parameters, then a header
///   draw,chain,b0,...,b27,s11,s22,s12
/// with b0-b13 the roughness equation and b14-b27 the power equation.
std::string serialize_draws(const PosteriorDraws& draws);
PosteriorDraws parse_draws(std::string_view csv_text);

void save_draws(const std::string& path, const PosteriorDraws& draws);
PosteriorDraws load_draws(const std::string& path);

}  // namespace suropt
