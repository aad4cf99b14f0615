#pragma once

#include <iosfwd>

namespace lrtc {

/// Entry point of the `lrtc` tool: synth | run | plot | metrics.
/// Returns 0 on success; failures print one `error: ...` line to err.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lrtc
