#include "fdpc/units.hpp"

#include <cmath>

namespace fdpc {

double db_to_linear(double x_db) { return std::pow(10.0, x_db / 10.0); }

double linear_to_db(double x) { return 10.0 * std::log10(x); }

double dbm_to_watts(double x_dbm) { return db_to_linear(x_dbm - 30.0); }

double dbw_to_watts(double x_dbw) { return db_to_linear(x_dbw); }

double watts_to_dbm(double watts) { return linear_to_db(watts) + 30.0; }

}  // namespace fdpc
