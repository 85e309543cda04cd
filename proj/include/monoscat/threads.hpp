#pragma once

namespace monoscat {

// Number of worker threads for the parallel kernels. Resolution order:
// explicit set_thread_count(), then the MONOSCAT_THREADS environment
// variable, then the OpenMP default.
int thread_count();
void set_thread_count(int n);

} // namespace monoscat
