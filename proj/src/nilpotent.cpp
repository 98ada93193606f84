#include "rlab/nilpotent.hpp"

namespace rlab {

NilpotentModel::NilpotentModel(std::vector<int> tops, std::vector<std::pair<std::vector<int>, Rational>> integral,
                               std::vector<std::string> names)
    : tops_(std::move(tops)), names_(std::move(names)) {
  for (int t : tops_) {
    if (t < 0) throw std::invalid_argument("negative top power");
    dim_ *= static_cast<std::size_t>(t + 1);
    max_degree_ += t;
  }
  if (dim_ > 4096) throw std::invalid_argument("nilpotent model too large");
  if (names_.empty())
    for (std::size_t i = 0; i < tops_.size(); ++i) names_.push_back("g" + std::to_string(i + 1));
  if (names_.size() != tops_.size()) throw std::invalid_argument("nilpotent generator names mismatch");

  degree_.resize(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    int d = 0;
    for (int e : multidegree(i)) d += e;
    degree_[i] = d;
  }
  mul_.assign(dim_ * dim_, -1);
  for (std::size_t a = 0; a < dim_; ++a) {
    auto ma = multidegree(a);
    for (std::size_t b = 0; b < dim_; ++b) {
      auto mb = multidegree(b);
      bool ok = true;
      for (std::size_t i = 0; i < tops_.size() && ok; ++i) {
        ma[i] += mb[i];
        ok = ma[i] <= tops_[i];
      }
      if (ok) mul_[a * dim_ + b] = static_cast<long>(index_of(ma));
      ma = multidegree(a);
    }
  }
  for (auto& [md, val] : integral) integral_.emplace_back(index_of(md), val);
}

std::shared_ptr<const NilpotentModel> NilpotentModel::point() {
  static const auto pt =
      std::make_shared<const NilpotentModel>(std::vector<int>{}, std::vector<std::pair<std::vector<int>, Rational>>{
                                                                     {{}, Rational(1)}});
  return pt;
}

std::size_t NilpotentModel::index_of(const std::vector<int>& md) const {
  if (md.size() != tops_.size()) throw std::invalid_argument("multidegree has wrong length");
  std::size_t idx = 0;
  for (std::size_t i = tops_.size(); i-- > 0;) {
    if (md[i] < 0 || md[i] > tops_[i]) throw std::invalid_argument("multidegree exceeds top power");
    idx = idx * static_cast<std::size_t>(tops_[i] + 1) + static_cast<std::size_t>(md[i]);
  }
  return idx;
}

std::vector<int> NilpotentModel::multidegree(std::size_t index) const {
  std::vector<int> md(tops_.size());
  for (std::size_t i = 0; i < tops_.size(); ++i) {
    auto r = static_cast<std::size_t>(tops_[i] + 1);
    md[i] = static_cast<int>(index % r);
    index /= r;
  }
  return md;
}

}  // namespace rlab
