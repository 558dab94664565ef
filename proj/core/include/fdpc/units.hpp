#pragma once

// Unit conversions. Everything inside the library is linear watts / linear
// gains; decibel forms only appear at configuration boundaries.

namespace fdpc {

/// 10^(x/10).
double db_to_linear(double x_db);

double linear_to_db(double x);

double dbm_to_watts(double x_dbm);
double dbw_to_watts(double x_dbw);
double watts_to_dbm(double watts);

}  // namespace fdpc
