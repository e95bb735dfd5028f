#include "unitrans/executor.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <fstream>
#include <random>

#include "unitrans/errors.hpp"
#include "unitrans/harness.hpp"
#include "unitrans/text.hpp"

namespace unitrans {

namespace {

constexpr const char* kProgramMarker = "{{PROGRAM}}";
constexpr const char* kTestsMarker = "{{TESTS}}";
constexpr std::size_t kCaptureCap = 8 * 1024 * 1024;

std::string signal_name(int sig) {
    switch (sig) {
        case SIGSEGV: return "SIGSEGV";
        case SIGABRT: return "SIGABRT";
        case SIGFPE: return "SIGFPE";
        case SIGBUS: return "SIGBUS";
        case SIGILL: return "SIGILL";
        case SIGPIPE: return "SIGPIPE";
        case SIGKILL: return "SIGKILL";
        case SIGTERM: return "SIGTERM";
        default: return "SIG" + std::to_string(sig);
    }
}

struct SpawnSpec {
    std::vector<std::string> argv;
    std::filesystem::path workdir;
    int timeout_ms = 10'000;
    std::uint64_t memory_bytes = 0;  // 0: no address-space cap
};

void read_into(int fd, std::string& sink, bool& open_flag) {
    char buf[16384];
    while (true) {
        ssize_t n = read(fd, buf, sizeof(buf));
        if (n > 0) {
            if (sink.size() < kCaptureCap) {
                sink.append(buf, static_cast<std::size_t>(
                                     std::min<std::size_t>(static_cast<std::size_t>(n),
                                                           kCaptureCap - sink.size())));
            }
            continue;
        }
        if (n == 0) {
            close(fd);
            open_flag = false;
        }
        return;  // EOF or EAGAIN; real errors surface as EOF on next poll
    }
}

ProcessResult run_process(const SpawnSpec& spec) {
    ProcessResult result;
    int out_pipe[2] = {-1, -1};
    int err_pipe[2] = {-1, -1};
    if (pipe(out_pipe) != 0 || pipe(err_pipe) != 0) {
        if (out_pipe[0] >= 0) {
            close(out_pipe[0]);
            close(out_pipe[1]);
        }
        result.spawn_failed = true;
        result.stderr_text = "unitrans-exec: pipe: " + std::string(strerror(errno));
        return result;
    }

    auto start = std::chrono::steady_clock::now();
    pid_t pid = fork();
    if (pid < 0) {
        for (int fd : {out_pipe[0], out_pipe[1], err_pipe[0], err_pipe[1]}) close(fd);
        result.spawn_failed = true;
        result.stderr_text = "unitrans-exec: fork: " + std::string(strerror(errno));
        return result;
    }

    if (pid == 0) {
        setpgid(0, 0);
        int devnull = open("/dev/null", O_RDONLY);
        if (devnull >= 0) dup2(devnull, STDIN_FILENO);
        dup2(out_pipe[1], STDOUT_FILENO);
        dup2(err_pipe[1], STDERR_FILENO);
        for (int fd : {out_pipe[0], out_pipe[1], err_pipe[0], err_pipe[1]}) close(fd);
        if (chdir(spec.workdir.c_str()) != 0) {
            dprintf(STDERR_FILENO, "unitrans-exec: chdir: %s\n", strerror(errno));
            _exit(127);
        }
        rlimit core{0, 0};
        setrlimit(RLIMIT_CORE, &core);
        if (spec.memory_bytes > 0) {
            rlimit mem{spec.memory_bytes, spec.memory_bytes};
            setrlimit(RLIMIT_AS, &mem);
        }
        const char* path = getenv("PATH");
        std::string path_var = std::string("PATH=") + (path ? path : "/usr/bin:/bin");
        std::string home_var = "HOME=" + spec.workdir.string();
        std::string tmp_var = "TMPDIR=" + spec.workdir.string();
        std::vector<char*> envp;
        for (const std::string* v : {&path_var, &home_var, &tmp_var}) {
            envp.push_back(const_cast<char*>(v->c_str()));
        }
        envp.push_back(const_cast<char*>("LC_ALL=C.UTF-8"));
        envp.push_back(nullptr);
        std::vector<char*> argv;
        for (const std::string& a : spec.argv) argv.push_back(const_cast<char*>(a.c_str()));
        argv.push_back(nullptr);
        execvpe(argv[0], argv.data(), envp.data());
        dprintf(STDERR_FILENO, "unitrans-exec: %s: %s\n", spec.argv[0].c_str(),
                strerror(errno));
        _exit(127);
    }

    setpgid(pid, pid);  // either side may win the race; both set the same group
    close(out_pipe[1]);
    close(err_pipe[1]);
    fcntl(out_pipe[0], F_SETFL, O_NONBLOCK);
    fcntl(err_pipe[0], F_SETFL, O_NONBLOCK);

    bool out_open = true;
    bool err_open = true;
    bool reaped = false;
    bool killed = false;
    int status = 0;
    auto deadline = start + std::chrono::milliseconds(spec.timeout_ms);

    while (out_open || err_open || !reaped) {
        auto now = std::chrono::steady_clock::now();
        if (!killed && now >= deadline) {
            kill(-pid, SIGKILL);
            kill(pid, SIGKILL);
            killed = true;
            result.timed_out = true;
            deadline = now + std::chrono::seconds(2);  // grace for draining
        } else if (killed && now >= deadline) {
            break;  // something still holds the pipes open; stop waiting
        }

        pollfd fds[2];
        nfds_t nfds = 0;
        if (out_open) fds[nfds++] = {out_pipe[0], POLLIN, 0};
        if (err_open) fds[nfds++] = {err_pipe[0], POLLIN, 0};
        int wait_ms = static_cast<int>(std::min<std::int64_t>(
            100, std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now)
                     .count()));
        if (wait_ms < 0) wait_ms = 0;
        if (nfds > 0) {
            poll(fds, nfds, wait_ms);
            for (nfds_t i = 0; i < nfds; ++i) {
                if (!(fds[i].revents & (POLLIN | POLLHUP | POLLERR))) continue;
                if (fds[i].fd == out_pipe[0]) {
                    read_into(out_pipe[0], result.stdout_text, out_open);
                } else {
                    read_into(err_pipe[0], result.stderr_text, err_open);
                }
            }
        }
        if (!reaped && waitpid(pid, &status, WNOHANG) == pid) {
            reaped = true;
            // After exit only a grandchild could keep the pipes open; give
            // the drain a short bound instead of the full deadline.
            auto drain_deadline = std::chrono::steady_clock::now() +
                                  std::chrono::milliseconds(500);
            if (drain_deadline < deadline) deadline = drain_deadline;
            killed = true;
        }
        if (reaped && !out_open && !err_open) break;
    }

    if (out_open) close(out_pipe[0]);
    if (err_open) close(err_pipe[0]);
    if (!reaped) {
        kill(-pid, SIGKILL);
        kill(pid, SIGKILL);
        waitpid(pid, &status, 0);
    }
    kill(-pid, SIGKILL);  // sweep any strays in the group

    result.wall_seconds = std::chrono::duration<double>(
                              std::chrono::steady_clock::now() - start)
                              .count();
    if (WIFEXITED(status)) {
        result.exit_code = WEXITSTATUS(status);
    } else if (WIFSIGNALED(status)) {
        result.exit_code = -1;
        result.term_signal = signal_name(WTERMSIG(status));
    }
    if (result.exit_code == 127 &&
        result.stderr_text.starts_with("unitrans-exec:")) {
        result.spawn_failed = true;
    }
    if (!result.term_signal.empty() && !result.timed_out) {
        if (!result.stderr_text.empty() && result.stderr_text.back() != '\n') {
            result.stderr_text += '\n';
        }
        result.stderr_text += "#SIGNAL " + result.term_signal + "\n";
    }
    return result;
}

std::filesystem::path make_scratch_dir() {
    static std::atomic<std::uint64_t> counter{0};
    static const std::uint64_t salt = std::random_device{}();
    auto dir = std::filesystem::temp_directory_path() /
               ("unitrans-" + std::to_string(getpid()) + "-" +
                std::to_string(counter.fetch_add(1)) + "-" + std::to_string(salt));
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw EnvironmentError("cannot create scratch dir " + dir.string());
    return dir;
}

std::vector<std::string> substitute_argv(const std::vector<std::string>& argv,
                                         const std::string& source_filename) {
    std::vector<std::string> out;
    for (std::string a : argv) {
        if (a == "{source}") a = source_filename;
        if (a == "{exe}") a = "./prog";
        out.push_back(std::move(a));
    }
    return out;
}

}  // namespace

ExecTemplate::ExecTemplate(Language lang, std::string text)
    : lang_(lang), text_(std::move(text)) {
    std::size_t program_lines = 0;
    std::size_t tests_lines = 0;
    std::vector<std::string> lines = split_lines(text_);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string t = trim(lines[i]);
        bool mentions_program = lines[i].find(kProgramMarker) != std::string::npos;
        bool mentions_tests = lines[i].find(kTestsMarker) != std::string::npos;
        if (t == kProgramMarker) {
            ++program_lines;
            prefix_lines_ = i;
        } else if (t == kTestsMarker) {
            ++tests_lines;
        } else if (mentions_program || mentions_tests) {
            throw ArgumentError("template markers must sit alone on their line");
        }
    }
    if (program_lines != 1 || tests_lines != 1) {
        throw ArgumentError("template needs exactly one {{PROGRAM}} and one {{TESTS}} line");
    }
}

std::string ExecTemplate::materialize(const std::string& program,
                                      const std::string& tests) const {
    std::vector<std::string> out;
    for (const std::string& line : split_lines(text_)) {
        std::string t = trim(line);
        if (t == kProgramMarker) {
            for (std::string& p : split_lines(program)) out.push_back(std::move(p));
        } else if (t == kTestsMarker) {
            for (std::string& p : split_lines(tests)) out.push_back(std::move(p));
        } else {
            out.push_back(line);
        }
    }
    return join_lines(out) + "\n";
}

const ExecTemplate& default_template(Language lang) {
    auto build = [](Language l, std::vector<std::string> tail) {
        std::vector<std::string> lines = harness_prefix_lines(l);
        lines.push_back(kProgramMarker);
        lines.push_back("");
        lines.push_back(kTestsMarker);
        for (std::string& t : tail) lines.push_back(std::move(t));
        return ExecTemplate(l, join_lines(lines) + "\n");
    };
    static const ExecTemplate python = build(Language::python, {});
    static const ExecTemplate java = build(Language::java, {"}"});
    static const ExecTemplate cpp = build(Language::cpp, {});
    switch (lang) {
        case Language::python: return python;
        case Language::java: return java;
        case Language::cpp: return cpp;
    }
    return cpp;
}

std::string materialize_eval(const std::string& suite_text, const std::string& program) {
    std::vector<std::string> out;
    std::size_t hits = 0;
    for (const std::string& line : split_lines(suite_text)) {
        if (trim(line) == kProgramMarker) {
            ++hits;
            for (std::string& p : split_lines(program)) out.push_back(std::move(p));
        } else {
            out.push_back(line);
        }
    }
    if (hits != 1) {
        throw ParseError("eval suite needs exactly one {{PROGRAM}} line");
    }
    return join_lines(out) + "\n";
}

Toolchain default_toolchain(Language lang) {
    switch (lang) {
        case Language::python:
            return {Language::python,
                    "tmp.py",
                    {"python3", "-m", "py_compile", "{source}"},
                    {"python3", "{source}"},
                    true};
        case Language::java:
            return {Language::java,
                    "tmp.java",
                    {"javac", "{source}"},
                    {"java", "-Xmx512m", "-cp", ".", "tmp"},
                    false};
        case Language::cpp:
            return {Language::cpp,
                    "tmp.cpp",
                    {"g++", "-std=c++17", "-O1", "-o", "{exe}", "{source}"},
                    {"{exe}"},
                    true};
    }
    throw ArgumentError("unknown language");
}

std::string exec_status_tag(ExecStatus s) {
    switch (s) {
        case ExecStatus::ok: return "ok";
        case ExecStatus::compile_error: return "compile_error";
        case ExecStatus::runtime_error: return "runtime_error";
        case ExecStatus::timeout: return "timeout";
        case ExecStatus::infra_error: return "infra_error";
    }
    return "?";
}

ExecStatus exec_status_from_tag(std::string_view tag) {
    for (ExecStatus s : {ExecStatus::ok, ExecStatus::compile_error, ExecStatus::runtime_error,
                         ExecStatus::timeout, ExecStatus::infra_error}) {
        if (exec_status_tag(s) == tag) return s;
    }
    throw ArgumentError("unknown execution status tag: " + std::string(tag));
}

ExecStatus classify_run(const ProcessResult& r) {
    if (r.spawn_failed) return ExecStatus::infra_error;
    if (r.timed_out) return ExecStatus::timeout;
    if (!r.term_signal.empty()) return ExecStatus::runtime_error;
    return r.exit_code == 0 ? ExecStatus::ok : ExecStatus::runtime_error;
}

ExecStatus classify_compile(const ProcessResult& r) {
    if (r.spawn_failed || r.timed_out || !r.term_signal.empty()) {
        return ExecStatus::infra_error;
    }
    return r.exit_code == 0 ? ExecStatus::ok : ExecStatus::compile_error;
}

PreparedProgram::PreparedProgram(PreparedProgram&& other) noexcept { *this = std::move(other); }

PreparedProgram& PreparedProgram::operator=(PreparedProgram&& other) noexcept {
    if (this != &other) {
        if (owns_dir_) {
            std::error_code ec;
            std::filesystem::remove_all(dir_, ec);
        }
        toolchain_ = std::move(other.toolchain_);
        limits_ = other.limits_;
        dir_ = std::move(other.dir_);
        compile_ = std::move(other.compile_);
        build_status_ = other.build_status_;
        owns_dir_ = other.owns_dir_;
        other.owns_dir_ = false;
    }
    return *this;
}

PreparedProgram::~PreparedProgram() {
    if (owns_dir_) {
        std::error_code ec;
        std::filesystem::remove_all(dir_, ec);
    }
}

ProcessResult PreparedProgram::run(const std::vector<std::string>& extra_args) const {
    SpawnSpec spec;
    spec.argv = substitute_argv(toolchain_.run_argv, toolchain_.source_filename);
    for (const std::string& a : extra_args) spec.argv.push_back(a);
    spec.workdir = dir_;
    spec.timeout_ms = limits_.wall_timeout_ms;
    spec.memory_bytes = toolchain_.rlimit_memory ? limits_.memory_bytes : 0;
    return run_process(spec);
}

PreparedProgram Executor::prepare(const Toolchain& tc, const std::string& file_content) const {
    PreparedProgram prog;
    prog.toolchain_ = tc;
    prog.limits_ = limits_;
    prog.dir_ = make_scratch_dir();
    prog.owns_dir_ = true;

    std::ofstream out(prog.dir_ / tc.source_filename, std::ios::binary);
    out << file_content;
    out.close();
    if (!out) throw EnvironmentError("cannot write " + tc.source_filename);

    if (tc.compile_argv.empty()) {
        prog.build_status_ = ExecStatus::ok;
        return prog;
    }
    SpawnSpec spec;
    spec.argv = substitute_argv(tc.compile_argv, tc.source_filename);
    spec.workdir = prog.dir_;
    spec.timeout_ms = limits_.compile_timeout_ms;
    spec.memory_bytes = tc.rlimit_memory ? limits_.memory_bytes : 0;
    prog.compile_ = run_process(spec);
    prog.build_status_ = classify_compile(prog.compile_);
    return prog;
}

std::string case_status_tag(CaseStatus s) {
    switch (s) {
        case CaseStatus::pass: return "pass";
        case CaseStatus::fail: return "fail";
        case CaseStatus::compile_error: return "compile_error";
        case CaseStatus::runtime_error: return "runtime_error";
        case CaseStatus::timeout: return "timeout";
        case CaseStatus::infra_error: return "infra_error";
    }
    return "?";
}

CaseStatus case_status_from_tag(std::string_view tag) {
    for (CaseStatus s : {CaseStatus::pass, CaseStatus::fail, CaseStatus::compile_error,
                         CaseStatus::runtime_error, CaseStatus::timeout, CaseStatus::infra_error}) {
        if (case_status_tag(s) == tag) return s;
    }
    throw ArgumentError("unknown case status tag: " + std::string(tag));
}

namespace {

// Scans one compact literal: quoted strings may hold spaces, brackets nest.
std::size_t scan_literal(const std::string& s, std::size_t pos) {
    int depth = 0;
    bool in_string = false;
    while (pos < s.size()) {
        char c = s[pos];
        if (in_string) {
            if (c == '\\') {
                pos += 2;
                continue;
            }
            if (c == '"') in_string = false;
        } else if (c == '"') {
            in_string = true;
        } else if (c == '[') {
            ++depth;
        } else if (c == ']') {
            --depth;
        } else if (c == ' ' && depth == 0) {
            break;
        }
        ++pos;
    }
    return pos;
}

}  // namespace

std::vector<CaseOutcome> parse_verdict_lines(const std::string& stdout_text) {
    std::vector<CaseOutcome> out;
    for (const std::string& line : split_lines(stdout_text)) {
        if (!line.starts_with("#CASE ")) continue;
        std::size_t pos = 6;
        std::size_t idx_end = line.find(' ', pos);
        if (idx_end == std::string::npos) continue;
        std::size_t index = 0;
        try {
            std::size_t used = 0;
            index = std::stoul(line.substr(pos, idx_end - pos), &used);
            if (used != idx_end - pos) continue;
        } catch (const std::exception&) {
            continue;
        }
        pos = idx_end + 1;
        CaseStatus status;
        if (line.compare(pos, 5, "PASS ") == 0 || line.compare(pos, 4, "PASS") == 0) {
            status = CaseStatus::pass;
            pos += 4;
        } else if (line.compare(pos, 5, "FAIL ") == 0 || line.compare(pos, 4, "FAIL") == 0) {
            status = CaseStatus::fail;
            pos += 4;
        } else {
            continue;
        }
        CaseOutcome outcome{index, status, "", ""};
        const std::string expected_key = " expected=";
        if (line.compare(pos, expected_key.size(), expected_key) == 0) {
            pos += expected_key.size();
            std::size_t end = scan_literal(line, pos);
            outcome.expected = line.substr(pos, end - pos);
            pos = end;
            const std::string actual_key = " actual=";
            if (line.compare(pos, actual_key.size(), actual_key) == 0) {
                outcome.actual = line.substr(pos + actual_key.size());
            }
        }
        out.push_back(std::move(outcome));
    }
    return out;
}

std::size_t CaseRunReport::passed() const {
    std::size_t n = 0;
    for (const CaseOutcome& c : cases) n += c.status == CaseStatus::pass ? 1 : 0;
    return n;
}

double CaseRunReport::pass_fraction() const {
    return cases.empty() ? 0.0 : static_cast<double>(passed()) / cases.size();
}

bool CaseRunReport::all_passed() const {
    return exec_status == ExecStatus::ok && passed() == cases.size();
}

namespace {

// Runtime diagnostics embed the absolute scratch path; replacing it keeps
// reports byte-identical across runs.
std::string scrub_scratch(std::string text, const std::string& dir) {
    if (dir.empty()) return text;
    std::size_t pos = 0;
    while ((pos = text.find(dir, pos)) != std::string::npos) {
        text.replace(pos, dir.size(), "<scratch>");
        pos += 9;
    }
    return text;
}

}  // namespace

CaseRunReport run_case_file(const Executor& exec, const Toolchain& tc,
                            const std::string& file_content, std::size_t case_count) {
    CaseRunReport report;
    report.cases.resize(case_count);
    for (std::size_t i = 0; i < case_count; ++i) report.cases[i].index = i;

    PreparedProgram prog = exec.prepare(tc, file_content);
    const std::string scratch = prog.scratch_dir().string();
    report.wall_seconds = prog.compile_result().wall_seconds;
    if (prog.build_status() != ExecStatus::ok) {
        report.exec_status = prog.build_status();
        report.error_text = scrub_scratch(prog.compile_result().stderr_text, scratch);
        CaseStatus blanket = report.exec_status == ExecStatus::compile_error
                                 ? CaseStatus::compile_error
                                 : CaseStatus::infra_error;
        for (CaseOutcome& c : report.cases) c.status = blanket;
        return report;
    }

    ProcessResult run = prog.run();
    report.wall_seconds += run.wall_seconds;
    report.exec_status = classify_run(run);
    report.error_text = scrub_scratch(run.stderr_text, scratch);

    std::vector<bool> filled(case_count, false);
    for (CaseOutcome& seen : parse_verdict_lines(run.stdout_text)) {
        if (seen.index >= case_count || filled[seen.index]) continue;
        filled[seen.index] = true;
        report.cases[seen.index] = std::move(seen);
    }
    CaseStatus missing;
    switch (report.exec_status) {
        case ExecStatus::ok: missing = CaseStatus::infra_error; break;
        case ExecStatus::timeout: missing = CaseStatus::timeout; break;
        case ExecStatus::runtime_error: missing = CaseStatus::runtime_error; break;
        default: missing = CaseStatus::infra_error; break;
    }
    for (std::size_t i = 0; i < case_count; ++i) {
        if (!filled[i]) report.cases[i].status = missing;
    }
    return report;
}

std::map<Language, ToolchainAvailability> probe_toolchains() {
    auto probe_cmd = [](std::vector<std::string> argv) {
        SpawnSpec spec;
        spec.argv = std::move(argv);
        spec.workdir = std::filesystem::temp_directory_path();
        spec.timeout_ms = 10'000;
        return run_process(spec);
    };
    auto first_line = [](const ProcessResult& r) {
        std::vector<std::string> lines = split_lines(trim(r.stdout_text + r.stderr_text));
        return lines.empty() ? std::string() : lines.front();
    };

    std::map<Language, ToolchainAvailability> out;

    ProcessResult py = probe_cmd({"python3", "--version"});
    out[Language::python] = {classify_run(py) == ExecStatus::ok, first_line(py)};

    ProcessResult gxx = probe_cmd({"g++", "--version"});
    out[Language::cpp] = {classify_run(gxx) == ExecStatus::ok, first_line(gxx)};

    ProcessResult javac = probe_cmd({"javac", "-version"});
    ProcessResult java = probe_cmd({"java", "-version"});
    bool java_ok = classify_run(javac) == ExecStatus::ok && classify_run(java) == ExecStatus::ok;
    std::string detail = java_ok ? first_line(javac)
                                 : trim(first_line(javac) + " " + first_line(java));
    out[Language::java] = {java_ok, detail};
    return out;
}

}  // namespace unitrans
