#pragma once

#include "fountain/lt.hpp"

namespace fountain {

// Maximum-likelihood erasure decoding: Gaussian elimination over the full
// received system. Recovers everything the received symbols determine, even
// when the system is rank deficient.
DecodeReport ml_solve(uint32_t k, const std::vector<std::vector<uint32_t>>& checks,
                      std::vector<Payload> values);
DecodeReport ml_decode(const CodeParams& p, const std::vector<EncodingSymbol>& received);

// Inactivation decoding: peel as long as degree-one checks exist; on a stall
// inactivate one variable chosen from a lowest-degree check and resume. The
// inactivated variables are solved densely at the end and substituted back
// through the peeling schedule. Produces exactly the ML solution.
DecodeReport inactivation_solve(uint32_t k, const std::vector<std::vector<uint32_t>>& checks,
                                std::vector<Payload> values);
DecodeReport inactivation_decode(const CodeParams& p,
                                 const std::vector<EncodingSymbol>& received);

}  // namespace fountain
