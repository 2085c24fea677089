// Trace CSV emission. Values are rendered with 17 significant digits so a
// re-parse reproduces the exact binary doubles.

#ifndef RENDEZVOUS_CSV_HPP
#define RENDEZVOUS_CSV_HPP

#include "rendezvous/trace.hpp"

#include <iosfwd>
#include <string>

namespace rendezvous {

// Columns: step, time_s, then per robot i:
// x_i, y_i, theta_i, xhat_i, yhat_i, Px_i, Py_i, ux_i, uy_i, vl_i, vr_i.
void emit_trace_csv(const EpisodeTrace& trace, const std::string& path);
void emit_trace_csv(const EpisodeTrace& trace, std::ostream& out);

// Inverse of emit_trace_csv for the columns above (filter gains and
// innovations are not serialized).
EpisodeTrace parse_trace_csv(const std::string& path);

} // namespace rendezvous

#endif
