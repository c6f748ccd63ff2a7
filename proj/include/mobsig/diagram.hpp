#pragma once

#include <span>
#include <string>

#include "mobsig/trace.hpp"

namespace mobsig {

/// ASCII sequence diagram: one column per functional entity, one line per
/// record. Entities outside the standard six get extra columns in order of
/// first appearance. Annotations are drawn as a note on the sender's column.
std::string render_diagram(std::span<const TraceRecord> trace);

}  // namespace mobsig
