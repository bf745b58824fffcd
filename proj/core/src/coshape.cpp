#include "gml/coshape.hpp"

#include <stdexcept>

namespace gml {

CoShapePtr co_leaf(int n) {
  if (n < 0) throw std::invalid_argument("co_leaf: negative size");
  auto s = std::make_shared<CoShape>();
  s->leafSize = n;
  return s;
}

CoShapePtr co_branch(CoShapePtr l, CoShapePtr r) {
  auto s = std::make_shared<CoShape>();
  s->left = std::move(l);
  s->right = std::move(r);
  return s;
}

int co_width(const CoShapePtr& s) {
  if (s->leafSize >= 0) return s->leafSize;
  return co_width(s->left) + co_width(s->right);
}

namespace {

// Marks [base, base+width) of the subtree reached by path.
void markPath(const CoShapePtr& s, const SumPath& path, size_t at, int base,
              std::vector<bool>& mask) {
  if (at == path.size()) {
    int w = co_width(s);
    for (int i = 0; i < w; ++i) mask[base + i] = true;
    return;
  }
  if (s->leafSize >= 0) throw std::invalid_argument("summand_mask: path descends into a leaf");
  if (path[at] == 1) {
    markPath(s->left, path, at + 1, base, mask);
  } else if (path[at] == 2) {
    markPath(s->right, path, at + 1, base + co_width(s->left), mask);
  } else {
    throw std::invalid_argument("summand_mask: path entries must be 1 or 2");
  }
}

} // namespace

std::vector<bool> summand_mask(const CoShapePtr& shape, const std::vector<SumPath>& paths) {
  std::vector<bool> mask(static_cast<size_t>(co_width(shape)), false);
  for (const SumPath& p : paths) markPath(shape, p, 0, 0, mask);
  return mask;
}

} // namespace gml
