#pragma once

namespace uhlfid {

/// Sets the thread count of the linear-algebra backend. Returns false when
/// the backend offers no control (the request is then ignored).
bool set_backend_threads(int threads);

/// Thread count most recently requested through set_backend_threads (1 by default).
int backend_threads();

}  // namespace uhlfid
