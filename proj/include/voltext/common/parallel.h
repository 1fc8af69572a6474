#pragma once

namespace voltext {

// Kernels with a data-parallel inner loop come in two flavours: a plain
// serial loop kept as the reference, and an OpenMP loop. Both must produce
// bit-identical results (reductions are always performed in index order).
enum class Exec { kSerial, kParallel };

void set_num_threads(int n);
int num_threads();

}  // namespace voltext
