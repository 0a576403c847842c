#pragma once

#include "rdecaf/types.hpp"

namespace rdecaf {

/// Flips each row so that its largest-magnitude entry (first one on ties) is
/// positive. Makes fitted directions deterministic.
void align_row_signs(Matrix& directions);

/// Same convention applied to columns.
void align_column_signs(Matrix& directions);

}  // namespace rdecaf
