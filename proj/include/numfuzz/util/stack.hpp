#pragma once

#include <pthread.h>

#include <cstddef>
#include <exception>
#include <optional>
#include <stdexcept>
#include <type_traits>
#include <utility>

namespace numfuzz {

constexpr std::size_t kBigStack = std::size_t(1) << 30;

/// Runs f on a fresh thread with a `bytes`-sized stack and returns its
/// result, rethrowing anything it throws. The checker and evaluator recurse
/// on term depth, which generated programs push into the tens of thousands.
template <typename F>
auto with_stack(std::size_t bytes, F&& f) -> std::invoke_result_t<F&> {
  using R = std::invoke_result_t<F&>;
  struct State {
    std::remove_reference_t<F>* fn;
    std::conditional_t<std::is_void_v<R>, bool, std::optional<R>> result{};
    std::exception_ptr error;
  } state{&f, {}, {}};

  auto entry = [](void* p) -> void* {
    auto* s = static_cast<State*>(p);
    try {
      if constexpr (std::is_void_v<R>) {
        (*s->fn)();
      } else {
        s->result.emplace((*s->fn)());
      }
    } catch (...) {
      s->error = std::current_exception();
    }
    return nullptr;
  };

  pthread_attr_t attr;
  pthread_attr_init(&attr);
  pthread_attr_setstacksize(&attr, bytes);
  pthread_t thread;
  int rc = pthread_create(&thread, &attr, entry, &state);
  pthread_attr_destroy(&attr);
  if (rc != 0) throw std::runtime_error("cannot start a worker thread");
  pthread_join(thread, nullptr);
  if (state.error) std::rethrow_exception(state.error);
  if constexpr (!std::is_void_v<R>) return std::move(*state.result);
}

}  // namespace numfuzz
