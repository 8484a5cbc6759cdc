#include "seal/metrics.hpp"

#include "seal/errors.hpp"

namespace seal {

double accuracy(const std::vector<int>& predictions, const std::vector<int>& truth) {
  if (predictions.size() != truth.size())
    throw usage_error("accuracy: prediction/truth count mismatch");
  if (predictions.empty()) throw usage_error("accuracy: empty input");
  size_t correct = 0;
  for (size_t i = 0; i < predictions.size(); ++i)
    if (predictions[i] == truth[i]) ++correct;
  return static_cast<double>(correct) / predictions.size();
}

double macro_f1(const std::vector<int>& predictions, const std::vector<int>& truth,
                int num_classes) {
  if (predictions.size() != truth.size())
    throw usage_error("macro_f1: prediction/truth count mismatch");
  if (predictions.empty()) throw usage_error("macro_f1: empty input");
  if (num_classes < 1) throw usage_error("macro_f1: class count must be positive");

  std::vector<long> tp(num_classes, 0), fp(num_classes, 0), fn(num_classes, 0);
  for (size_t i = 0; i < predictions.size(); ++i) {
    const int p = predictions[i], t = truth[i];
    if (p < 0 || p >= num_classes || t < 0 || t >= num_classes)
      throw index_error("macro_f1: class out of range at position " + std::to_string(i));
    if (p == t) {
      ++tp[p];
    } else {
      ++fp[p];
      ++fn[t];
    }
  }
  double sum = 0.0;
  for (int c = 0; c < num_classes; ++c) {
    const double denom = 2.0 * tp[c] + fp[c] + fn[c];
    sum += denom > 0.0 ? 2.0 * tp[c] / denom : 0.0;
  }
  return sum / num_classes;
}

}  // namespace seal
