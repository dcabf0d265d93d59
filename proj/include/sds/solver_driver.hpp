#pragma once

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace sds {

struct SolverResult {
    enum class Kind { Sat, Unsat, Unknown, Error };
    Kind kind = Kind::Error;
    std::vector<std::string> core;  // named assertions when unsat and requested
    std::string detail;             // reason for Unknown/Error
};

namespace detail {

/// Line-oriented, tolerant of banner noise: the first bare sat/unsat/unknown
/// token decides the status; a following parenthesized list is the core.
inline SolverResult parse_solver_output(const std::string& text) {
    SolverResult res;
    res.kind = SolverResult::Kind::Error;
    std::istringstream in(text);
    std::string line;
    bool have_status = false;
    std::string core_text;
    bool in_core = false;
    int depth = 0;
    while (std::getline(in, line)) {
        std::string trimmed = line;
        while (!trimmed.empty() && isspace(static_cast<unsigned char>(trimmed.back())))
            trimmed.pop_back();
        size_t start = trimmed.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        trimmed = trimmed.substr(start);
        if (!have_status) {
            if (trimmed == "sat") {
                res.kind = SolverResult::Kind::Sat;
                have_status = true;
            } else if (trimmed == "unsat") {
                res.kind = SolverResult::Kind::Unsat;
                have_status = true;
            } else if (trimmed == "unknown") {
                res.kind = SolverResult::Kind::Unknown;
                res.detail = "solver reported unknown";
                have_status = true;
            }
            continue;
        }
        if (res.kind != SolverResult::Kind::Unsat) break;
        // Collect a possibly multi-line core s-expression.
        for (char c : trimmed) {
            if (c == '(') {
                in_core = true;
                ++depth;
                core_text += ' ';
            } else if (c == ')') {
                --depth;
                core_text += ' ';
            } else if (in_core) {
                core_text += c;
            }
        }
        if (in_core && depth == 0) break;
    }
    if (!have_status) {
        res.kind = SolverResult::Kind::Error;
        res.detail = "no status token in solver output";
        return res;
    }
    std::istringstream names(core_text);
    std::string name;
    while (names >> name) res.core.push_back(name);
    return res;
}

}  // namespace detail

/// Runs `executable args... instance-file` with the SMT text written to a
/// temporary file, kills the child on timeout, and parses the output.
inline SolverResult run_solver(const std::string& executable, std::vector<std::string> args,
                               const std::string& smt_text, double timeout_seconds = 60.0) {
    SolverResult res;
    if (access(executable.c_str(), X_OK) != 0) {
        res.kind = SolverResult::Kind::Error;
        res.detail = "solver executable not found: " + executable;
        return res;
    }

    char path[] = "/tmp/sdscheck-XXXXXX.smt2";
    int tmp_fd = mkstemps(path, 5);
    if (tmp_fd < 0) {
        res.detail = "cannot create temp file";
        return res;
    }
    {
        ssize_t off = 0;
        while (off < static_cast<ssize_t>(smt_text.size())) {
            ssize_t n = write(tmp_fd, smt_text.data() + off, smt_text.size() - off);
            if (n <= 0) break;
            off += n;
        }
        close(tmp_fd);
    }

    int pipe_fd[2];
    if (pipe(pipe_fd) != 0) {
        unlink(path);
        res.detail = "pipe failed";
        return res;
    }
    pid_t pid = fork();
    if (pid < 0) {
        unlink(path);
        res.detail = "fork failed";
        return res;
    }
    if (pid == 0) {
        dup2(pipe_fd[1], STDOUT_FILENO);
        dup2(pipe_fd[1], STDERR_FILENO);
        close(pipe_fd[0]);
        close(pipe_fd[1]);
        std::vector<char*> argv;
        argv.push_back(const_cast<char*>(executable.c_str()));
        for (auto& a : args) argv.push_back(const_cast<char*>(a.c_str()));
        argv.push_back(path);
        argv.push_back(nullptr);
        execvp(executable.c_str(), argv.data());
        _exit(127);
    }
    close(pipe_fd[1]);

    std::string output;
    char buf[4096];
    bool timed_out = false;
    auto deadline =
        std::chrono::steady_clock::now() + std::chrono::duration<double>(timeout_seconds);
    while (true) {
        auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                        deadline - std::chrono::steady_clock::now())
                        .count();
        if (left <= 0) {
            timed_out = true;
            break;
        }
        struct pollfd pfd{pipe_fd[0], POLLIN, 0};
        int rc = poll(&pfd, 1, static_cast<int>(left));
        if (rc == 0) {
            timed_out = true;
            break;
        }
        if (rc < 0) break;
        ssize_t n = read(pipe_fd[0], buf, sizeof(buf));
        if (n <= 0) break;
        output.append(buf, static_cast<size_t>(n));
    }
    close(pipe_fd[0]);
    if (timed_out) {
        kill(pid, SIGKILL);
        waitpid(pid, nullptr, 0);
        unlink(path);
        res.kind = SolverResult::Kind::Unknown;
        res.detail = "timeout after " + std::to_string(timeout_seconds) + "s";
        return res;
    }
    int status = 0;
    waitpid(pid, &status, 0);
    unlink(path);
    if (WIFEXITED(status) && WEXITSTATUS(status) == 127) {
        res.kind = SolverResult::Kind::Error;
        res.detail = "could not execute " + executable;
        return res;
    }
    return detail::parse_solver_output(output);
}

}  // namespace sds
