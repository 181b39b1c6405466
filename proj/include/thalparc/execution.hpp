#pragma once

namespace thalparc {

/// `sequential` runs the serial reference kernels and is bit-reproducible.
/// `parallel` runs the OpenMP kernels; layout optimisation then tolerates
/// unsynchronised coordinate updates.
enum class Execution { sequential, parallel };

} // namespace thalparc
