#pragma once

#include <vector>

namespace seal {

double accuracy(const std::vector<int>& predictions, const std::vector<int>& truth);

// Unweighted mean over classes of per-class F1; a class with zero
// precision+recall contributes 0.
double macro_f1(const std::vector<int>& predictions, const std::vector<int>& truth,
                int num_classes);

}  // namespace seal
