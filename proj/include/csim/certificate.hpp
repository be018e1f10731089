#pragma once

// JSON form of a Misiurewicz certificate. Complex values are [re, im] pairs
// written with 17 significant digits.

#include <string>

#include "csim/curve.hpp"

namespace csim {

std::string certificate_to_json(const MisiurewiczCertificate& cert);

/// Parses a certificate and rebuilds its chart. Throws Io on malformed input
/// and OffCurve / NotMinimal if the stored map is not on S_p.
MisiurewiczCertificate certificate_from_json(const std::string& text);

}  // namespace csim
