#pragma once
//
// Loop over independent items, in parallel when OpenMP is enabled. The first
// exception raised by any item is rethrown on the calling thread.
//

#include <cstddef>
#include <exception>

namespace dh2 {

template <typename F>
void parallel_for(std::size_t n, F&& body)
{
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        try {
            body(static_cast<std::size_t>(i));
        }
        catch (...) {
#pragma omp critical(dh2_parallel_error)
            if (!error)
                error = std::current_exception();
        }
    }
    if (error)
        std::rethrow_exception(error);
}

} // namespace dh2
