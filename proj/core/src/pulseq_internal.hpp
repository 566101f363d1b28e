#pragma once

#include "adpdtc/pulseq.hpp"

namespace adpdtc::pulseq::detail {

// Expression parser with error offsets shifted by `base`.
ExprPtr parse_expression_at(const std::string& text, std::size_t base);

}  // namespace adpdtc::pulseq::detail
