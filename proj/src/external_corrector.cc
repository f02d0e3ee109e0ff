// Copyright 2026 The ocrpipe Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <ctime>

#include "ocrpipe/corrector.h"
#include "ocrpipe/error.h"
#include "ocrpipe/text.h"

extern char** environ;

namespace ocrpipe {
namespace {

constexpr size_t kMaxDiagnostics = 4096;

class Fd {
 public:
  Fd() = default;
  explicit Fd(int fd) : fd_(fd) {}
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  Fd(Fd&& other) noexcept : fd_(other.release()) {}
  Fd& operator=(Fd&& other) noexcept {
    reset(other.release());
    return *this;
  }
  ~Fd() { reset(); }

  int get() const { return fd_; }
  int release() {
    const int fd = fd_;
    fd_ = -1;
    return fd;
  }
  void reset(int fd = -1) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = fd;
  }

 private:
  int fd_ = -1;
};

void MakePipe(Fd* read_end, Fd* write_end) {
  int fds[2];
  if (::pipe2(fds, O_CLOEXEC) != 0) throw ProcessFailure(std::string("pipe: ") + std::strerror(errno));
  read_end->reset(fds[0]);
  write_end->reset(fds[1]);
}

// Blocks SIGPIPE for the calling thread so a child that exits early turns
// writes into EPIPE; any pending SIGPIPE is consumed on scope exit.
class ScopedSigpipeBlock {
 public:
  ScopedSigpipeBlock() {
    sigemptyset(&set_);
    sigaddset(&set_, SIGPIPE);
    pthread_sigmask(SIG_BLOCK, &set_, &old_);
  }
  ~ScopedSigpipeBlock() {
    const timespec zero{0, 0};
    while (sigtimedwait(&set_, nullptr, &zero) > 0) {
    }
    pthread_sigmask(SIG_SETMASK, &old_, nullptr);
  }
  const sigset_t& old_mask() const { return old_; }

 private:
  sigset_t set_;
  sigset_t old_;
};

struct ChildOutput {
  std::string out;
  std::string err;
  int status = 0;
};

ChildOutput RunChild(const std::vector<std::string>& argv, const std::string& input) {
  if (argv.empty()) throw InvalidArgument("external corrector command is empty");
  ScopedSigpipeBlock sigpipe;

  Fd in_r, in_w, out_r, out_w, err_r, err_w;
  MakePipe(&in_r, &in_w);
  MakePipe(&out_r, &out_w);
  MakePipe(&err_r, &err_w);
  // Partial writes instead of blocking while the child's stdout is full.
  ::fcntl(in_w.get(), F_SETFL, ::fcntl(in_w.get(), F_GETFL) | O_NONBLOCK);

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_r.get(), STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out_w.get(), STDOUT_FILENO);
  posix_spawn_file_actions_adddup2(&actions, err_w.get(), STDERR_FILENO);
  posix_spawnattr_t attr;
  posix_spawnattr_init(&attr);
  posix_spawnattr_setsigmask(&attr, &sigpipe.old_mask());
  posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETSIGMASK);

  std::vector<char*> cargv;
  for (const std::string& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
  cargv.push_back(nullptr);

  pid_t pid = 0;
  const int rc = posix_spawnp(&pid, cargv[0], &actions, &attr, cargv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  posix_spawnattr_destroy(&attr);
  if (rc != 0) {
    throw ProcessFailure("cannot start \"" + argv[0] + "\": " + std::strerror(rc));
  }
  in_r.reset();
  out_w.reset();
  err_w.reset();

  ChildOutput result;
  size_t written = 0;
  if (input.empty()) in_w.reset();
  char buf[65536];
  while (out_r.get() >= 0 || err_r.get() >= 0) {
    pollfd fds[3];
    int n = 0;
    int out_slot = -1, err_slot = -1, in_slot = -1;
    if (out_r.get() >= 0) { fds[n] = {out_r.get(), POLLIN, 0}; out_slot = n++; }
    if (err_r.get() >= 0) { fds[n] = {err_r.get(), POLLIN, 0}; err_slot = n++; }
    if (in_w.get() >= 0) { fds[n] = {in_w.get(), POLLOUT, 0}; in_slot = n++; }
    if (::poll(fds, static_cast<nfds_t>(n), -1) < 0) {
      if (errno == EINTR) continue;
      throw ProcessFailure(std::string("poll: ") + std::strerror(errno));
    }
    if (in_slot >= 0 && fds[in_slot].revents != 0) {
      const ssize_t w = ::write(in_w.get(), input.data() + written, input.size() - written);
      if (w > 0) written += static_cast<size_t>(w);
      if (w < 0 && errno != EAGAIN && errno != EINTR) {
        in_w.reset();  // child stopped reading; its exit status decides
      } else if (written == input.size()) {
        in_w.reset();
      }
    }
    auto drain = [&](int slot, Fd* fd, std::string* sink) {
      if (slot < 0 || fds[slot].revents == 0) return;
      const ssize_t r = ::read(fd->get(), buf, sizeof(buf));
      if (r > 0) {
        sink->append(buf, static_cast<size_t>(r));
      } else if (r == 0 || (errno != EAGAIN && errno != EINTR)) {
        fd->reset();
      }
    };
    drain(out_slot, &out_r, &result.out);
    drain(err_slot, &err_r, &result.err);
  }
  in_w.reset();
  while (::waitpid(pid, &result.status, 0) < 0) {
    if (errno != EINTR) throw ProcessFailure(std::string("waitpid: ") + std::strerror(errno));
  }
  return result;
}

}  // namespace

std::vector<std::string> CorrectExternal(const std::vector<std::string>& lines,
                                         const std::vector<std::string>& argv) {
  std::string input;
  for (const std::string& line : lines) {
    if (line.find('\n') != std::string::npos) {
      throw InvalidArgument("line contains a newline; cannot use line protocol");
    }
    input += line;
    input += '\n';
  }
  const ChildOutput child = RunChild(argv, input);
  if (!WIFEXITED(child.status) || WEXITSTATUS(child.status) != 0) {
    std::string why = WIFEXITED(child.status)
                          ? "exit code " + std::to_string(WEXITSTATUS(child.status))
                          : "killed by signal " + std::to_string(WTERMSIG(child.status));
    throw ProcessFailure("\"" + argv[0] + "\" failed with " + why + "; stderr: " +
                         child.err.substr(0, kMaxDiagnostics));
  }

  std::vector<std::string> out;
  size_t start = 0;
  while (start < child.out.size()) {
    size_t end = child.out.find('\n', start);
    if (end == std::string::npos) end = child.out.size();
    std::string line = child.out.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(std::move(line));
    start = end + 1;
  }
  if (out.size() != lines.size()) {
    throw ProtocolError("sent " + std::to_string(lines.size()) + " lines, received " +
                        std::to_string(out.size()));
  }
  for (std::string& line : out) {
    try {
      line = Nfc(line);
    } catch (const ParseError& e) {
      throw ProtocolError(std::string("corrector emitted invalid UTF-8: ") + e.what());
    }
  }
  return out;
}

Document ApplyCorrections(const Document& doc, const std::vector<std::string>& corrected) {
  Document out = doc;
  size_t next = 0;
  for (Page& page : out.pages) {
    for (Line& line : page.lines) {
      if (next >= corrected.size()) throw InvalidArgument("fewer corrections than lines");
      std::vector<std::string> texts = SplitWhitespace(corrected[next++]);
      if (texts.size() == line.tokens.size()) {
        for (size_t i = 0; i < texts.size(); ++i) line.tokens[i].text = std::move(texts[i]);
      } else {
        line.tokens.clear();
        for (std::string& t : texts) line.tokens.push_back(Token{std::move(t), std::nullopt, std::nullopt, false});
      }
    }
  }
  if (next != corrected.size()) throw InvalidArgument("more corrections than lines");
  return out;
}

namespace {

std::vector<std::string> LineTexts(const Document& doc) {
  std::vector<std::string> texts;
  for (const Page& page : doc.pages) {
    for (const Line& line : page.lines) texts.push_back(line.Text());
  }
  return texts;
}

}  // namespace

Document CorrectDocument(const Document& doc, const ChannelModel& channel, const CharLm& lm,
                         const BeamConfig& config) {
  std::vector<std::string> corrected;
  for (const std::string& text : LineTexts(doc)) {
    corrected.push_back(CorrectLine(text, channel, lm, config));
  }
  return ApplyCorrections(doc, corrected);
}

Document CorrectDocumentExternal(const Document& doc, const std::vector<std::string>& argv) {
  return ApplyCorrections(doc, CorrectExternal(LineTexts(doc), argv));
}

}  // namespace ocrpipe
