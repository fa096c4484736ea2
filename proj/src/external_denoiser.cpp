#include <sys/wait.h>
#include <unistd.h>

#include <csignal>
#include <cstdio>
#include <sstream>
#include <thread>

#include "pnpmri/denoisers.hpp"
#include "pnpmri/errors.hpp"
#include "pnpmri/tensor_io.hpp"

namespace pnpmri {

namespace {

void close_fd(int& fd) {
  if (fd >= 0) {
    ::close(fd);
    fd = -1;
  }
}

// EPIPE must surface as a write error, not a process-killing signal.
void ignore_sigpipe_once() {
  static const bool done = [] {
    std::signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)done;
}

}  // namespace

ExternalDenoiser::ExternalDenoiser(std::string command)
    : command_(std::move(command)), lock_(std::make_unique<std::mutex>()) {
  if (command_.empty()) throw ConfigError("ExternalDenoiser: empty command");
}

ComplexTensor ExternalDenoiser::apply(const ComplexTensor& z) const {
  std::lock_guard<std::mutex> guard(*lock_);
  ignore_sigpipe_once();

  std::ostringstream obuf;
  tensor_write(z, obuf);
  const std::string payload = obuf.str();

  int to_child[2] = {-1, -1};
  int from_child[2] = {-1, -1};
  if (::pipe(to_child) != 0 || ::pipe(from_child) != 0)
    throw SubprocessError("ExternalDenoiser: pipe() failed");

  const pid_t pid = ::fork();
  if (pid < 0) throw SubprocessError("ExternalDenoiser: fork() failed");
  if (pid == 0) {
    ::dup2(to_child[0], STDIN_FILENO);
    ::dup2(from_child[1], STDOUT_FILENO);
    ::close(to_child[0]);
    ::close(to_child[1]);
    ::close(from_child[0]);
    ::close(from_child[1]);
    char eta_text[64];
    std::snprintf(eta_text, sizeof eta_text, "%.17g", eta_);
    ::setenv("DENOISER_ETA", eta_text, 1);
    ::execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }

  close_fd(to_child[0]);
  close_fd(from_child[1]);

  // Writer runs on its own thread so a streaming child cannot deadlock us.
  bool write_ok = true;
  std::thread writer([&] {
    std::size_t off = 0;
    while (off < payload.size()) {
      const ssize_t n = ::write(to_child[1], payload.data() + off, payload.size() - off);
      if (n <= 0) {
        write_ok = false;
        break;
      }
      off += static_cast<std::size_t>(n);
    }
    close_fd(to_child[1]);
  });

  std::string out;
  char buf[1 << 16];
  for (;;) {
    const ssize_t n = ::read(from_child[0], buf, sizeof buf);
    if (n < 0) {
      write_ok = false;
      break;
    }
    if (n == 0) break;
    out.append(buf, static_cast<std::size_t>(n));
  }
  writer.join();
  close_fd(from_child[0]);

  int status = 0;
  ::waitpid(pid, &status, 0);
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0)
    throw SubprocessError("ExternalDenoiser: child exited with status " +
                          std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : -1) + ": " +
                          command_);
  if (!write_ok) throw ProtocolError("ExternalDenoiser: child stopped reading its input");

  std::istringstream in(out);
  ComplexTensor result;
  try {
    result = tensor_read(in, /*expect_eof=*/true);
  } catch (const IoError& e) {
    throw ProtocolError(std::string("ExternalDenoiser: bad child output: ") + e.what());
  }
  if (result.shape != z.shape)
    throw ShapeError("ExternalDenoiser: child returned shape " + shape_str(result.shape) +
                     ", expected " + shape_str(z.shape));
  return result;
}

}  // namespace pnpmri
