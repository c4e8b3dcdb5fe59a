#include "operators/operator_context.hpp"

#include "core/errors.hpp"

namespace feecns {

OperatorContext::OperatorContext(const GridSpec& grid, const std::optional<BoundarySpec>& bc)
    : space_(std::make_unique<MultipatchSpace>(grid)), quad_(std::make_unique<QuadratureGrid>(*space_)) {
  if (!space_->fully_periodic()) {
    if (!bc) fail(ErrorCode::ConfigError, "a non-periodic domain needs boundary conditions");
    boundary_ = std::make_unique<BoundaryOperators>(*space_, *bc);
  } else if (bc) {
    validate_boundary(*space_, *bc);
  }
  identity1_ = SparseMatrix::identity(space_->dim(Slot::V1));
}

}  // namespace feecns
