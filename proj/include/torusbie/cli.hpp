#pragma once

namespace torusbie {

// exit codes: 0 ok, 1 selftest failure, 2 configuration error, 3 numerical failure
int run(int argc, char** argv);

} // namespace torusbie
