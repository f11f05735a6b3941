#pragma once

namespace airmax {

/// Entry point of the airmax command line tool. Returns 0 on success and 2 on
/// any usage, input or runtime error; never throws.
int cli_main(int argc, char** argv);

}  // namespace airmax
