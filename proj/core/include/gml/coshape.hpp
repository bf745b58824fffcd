#pragma once

#include <memory>
#include <vector>

// Nested binary coproducts laid out over flat indices, left leaf first.
// A summand selection is a list of paths (1 = left child, 2 = right child);
// expanding it yields the mask of flat indices it covers.

namespace gml {

struct CoShape;
using CoShapePtr = std::shared_ptr<const CoShape>;

struct CoShape {
  int leafSize = -1; // >= 0 iff leaf
  CoShapePtr left, right;
};

CoShapePtr co_leaf(int n);
CoShapePtr co_branch(CoShapePtr l, CoShapePtr r);
int co_width(const CoShapePtr& s);

using SumPath = std::vector<int>; // entries are 1 or 2

// Mask over co_width(shape) indices covered by the union of the paths.
// Paths must stay inside the shape; an empty path list selects nothing.
std::vector<bool> summand_mask(const CoShapePtr& shape, const std::vector<SumPath>& paths);

} // namespace gml
