#include "tenad/model.hpp"

#include <cerrno>
#include <csignal>
#include <cstdlib>
#include <cstring>
#include <mutex>
#include <sstream>
#include <vector>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

namespace tenad {

namespace {

std::vector<std::string> split_command(const std::string& command) {
    std::vector<std::string> argv;
    std::istringstream is(command);
    std::string word;
    while (is >> word) argv.push_back(word);
    return argv;
}

// write() on a dead child's pipe must come back as EPIPE, not SIGPIPE.
void ignore_sigpipe_once() {
    static std::once_flag flag;
    std::call_once(flag, [] { ::signal(SIGPIPE, SIG_IGN); });
}

}  // namespace

SubprocessModel::SubprocessModel(std::string command, Dims4 dims,
                                 double timeout_seconds)
    : BlackBoxModel(dims),
      command_(std::move(command)),
      timeout_seconds_(timeout_seconds) {
    if (split_command(command_).empty())
        throw std::invalid_argument("SubprocessModel: empty command");
    if (!(timeout_seconds_ > 0.0))
        throw std::invalid_argument("SubprocessModel: timeout must be > 0");
    ignore_sigpipe_once();
    std::string tmpl =
        (std::filesystem::temp_directory_path() / "tenad-model-XXXXXX")
            .string();
    std::vector<char> buf(tmpl.begin(), tmpl.end());
    buf.push_back('\0');
    if (::mkdtemp(buf.data()) == nullptr)
        throw std::runtime_error("SubprocessModel: mkdtemp failed");
    workdir_ = buf.data();
    spawn();
}

SubprocessModel::~SubprocessModel() {
    shutdown();
    std::error_code ec;
    std::filesystem::remove_all(workdir_, ec);
}

void SubprocessModel::spawn() {
    int to_child[2] = {-1, -1};
    int from_child[2] = {-1, -1};
    if (::pipe(to_child) != 0 || ::pipe(from_child) != 0)
        throw std::runtime_error("SubprocessModel: pipe failed");

    const std::vector<std::string> argv_strings = split_command(command_);
    std::vector<char*> argv;
    argv.reserve(argv_strings.size() + 1);
    for (const std::string& s : argv_strings)
        argv.push_back(const_cast<char*>(s.c_str()));
    argv.push_back(nullptr);

    pid_ = ::fork();
    if (pid_ < 0) throw std::runtime_error("SubprocessModel: fork failed");
    if (pid_ == 0) {
        ::dup2(to_child[0], STDIN_FILENO);
        ::dup2(from_child[1], STDOUT_FILENO);
        ::close(to_child[0]);
        ::close(to_child[1]);
        ::close(from_child[0]);
        ::close(from_child[1]);
        ::execvp(argv[0], argv.data());
        ::_exit(127);
    }
    ::close(to_child[0]);
    ::close(from_child[1]);
    to_child_ = to_child[1];
    from_child_ = from_child[0];
}

void SubprocessModel::shutdown() noexcept {
    if (to_child_ >= 0) ::close(to_child_);
    if (from_child_ >= 0) ::close(from_child_);
    to_child_ = from_child_ = -1;
    if (pid_ > 0) {
        ::kill(pid_, SIGTERM);
        int status = 0;
        for (int i = 0; i < 50; ++i) {
            if (::waitpid(pid_, &status, WNOHANG) == pid_) {
                pid_ = -1;
                return;
            }
            ::usleep(10'000);
        }
        ::kill(pid_, SIGKILL);
        ::waitpid(pid_, &status, 0);
        pid_ = -1;
    }
}

void SubprocessModel::fail(const std::string& why) {
    shutdown();
    throw ModelUnavailable("subprocess model unavailable: " + why,
                           unlocked_query_count());
}

Label SubprocessModel::do_predict(const Tensor4& x) {
    if (pid_ <= 0) fail("child not running");
    const std::filesystem::path query_path = workdir_ / "query.ten4";
    write_ten4(x, query_path);

    std::string request = std::filesystem::absolute(query_path).string() + "\n";
    std::size_t sent = 0;
    while (sent < request.size()) {
        const ssize_t n =
            ::write(to_child_, request.data() + sent, request.size() - sent);
        if (n < 0) {
            if (errno == EINTR) continue;
            fail(std::string("write failed: ") + std::strerror(errno));
        }
        sent += static_cast<std::size_t>(n);
    }

    const int timeout_ms = static_cast<int>(timeout_seconds_ * 1000.0);
    while (true) {
        const std::size_t eol = reply_buffer_.find('\n');
        if (eol != std::string::npos) {
            std::string line = reply_buffer_.substr(0, eol);
            reply_buffer_.erase(0, eol + 1);
            if (!line.empty() && line.back() == '\r') line.pop_back();
            std::size_t used = 0;
            long value = 0;
            try {
                value = std::stol(line, &used);
            } catch (const std::exception&) {
                fail("malformed reply '" + line + "'");
            }
            if (used != line.size() || value < 0)
                fail("malformed reply '" + line + "'");
            return static_cast<Label>(value);
        }
        struct pollfd pfd{from_child_, POLLIN, 0};
        const int rc = ::poll(&pfd, 1, timeout_ms);
        if (rc == 0) fail("timeout waiting for reply");
        if (rc < 0) {
            if (errno == EINTR) continue;
            fail(std::string("poll failed: ") + std::strerror(errno));
        }
        char chunk[256];
        const ssize_t n = ::read(from_child_, chunk, sizeof(chunk));
        if (n == 0) fail("child closed its stdout");
        if (n < 0) {
            if (errno == EINTR) continue;
            fail(std::string("read failed: ") + std::strerror(errno));
        }
        reply_buffer_.append(chunk, static_cast<std::size_t>(n));
    }
}

}  // namespace tenad
