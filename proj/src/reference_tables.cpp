#include "tuplesieve/reference_tables.hpp"

namespace tuplesieve {

const std::vector<ReferenceRow>& reference_table_condition() {
    static const std::vector<ReferenceRow> rows = {
        {"1", 7, 1, 20, false},    {"0.95", 8, 1, 26, false},
        {"0.90", 9, 1, 30, false}, {"0.85", 11, 1, 36, false},
        {"0.80", 16, 1, 60, false}, {"0.75", 21, 2, 84, false},
        {"0.70", 31, 2, 140, false}, {"0.65", 51, 3, 252, false},
        {"0.60", 111, 5, 634, false}, {"0.55", 421, 10, 2956, true},
    };
    return rows;
}

const std::vector<ReferenceRow>& reference_table_matrix() {
    static const std::vector<ReferenceRow> rows = {
        {"1", 6, 1, 16, false},    {"0.95", 7, 1, 20, false},
        {"0.90", 8, 2, 26, false}, {"0.85", 10, 2, 32, false},
        {"0.80", 12, 2, 42, false}, {"0.75", 16, 2, 60, false},
        {"0.70", 22, 4, 90, false}, {"0.65", 35, 4, 158, false},
        {"0.60", 65, 6, 336, false}, {"0.55", 193, 9, 1204, false},
    };
    return rows;
}

}  // namespace tuplesieve
