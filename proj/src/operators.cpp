#include "oneill/operators.hpp"

namespace oneill {

PointOperators<double> point_operators_checked(const ScenarioSpec& s,
                                               const std::vector<double>& p) {
    metric_at_checked(s.total, p);
    require_full_rank(map_jacobian(s, p), p);
    return point_operators_at<double>(s, p);
}

}  // namespace oneill
