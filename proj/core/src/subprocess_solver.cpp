#include "ldslab/subprocess_solver.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <fstream>
#include <sstream>

#include "ldslab/mps.hpp"
#include "text_util.hpp"

namespace ldslab {

namespace {

std::string substitute_all(std::string text, const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  while ((pos = text.find(key, pos)) != std::string::npos) {
    text.replace(pos, key.size(), value);
    pos += value.size();
  }
  return text;
}

struct ProcessResult {
  int exit_code = 0;
  bool timed_out = false;
  std::string stderr_text;
  double seconds = 0.0;
};

ProcessResult run_shell(const std::string& command, double time_limit_s) {
  int err_pipe[2];
  if (pipe(err_pipe) != 0) {
    throw SpawnError("pipe() failed");
  }

  const auto start = std::chrono::steady_clock::now();
  const pid_t pid = fork();
  if (pid < 0) {
    close(err_pipe[0]);
    close(err_pipe[1]);
    throw SpawnError("fork() failed");
  }
  if (pid == 0) {
    // Child: stderr to the pipe, stdout silenced.
    dup2(err_pipe[1], STDERR_FILENO);
    close(err_pipe[0]);
    close(err_pipe[1]);
    const int devnull = open("/dev/null", O_WRONLY);
    if (devnull >= 0) {
      dup2(devnull, STDOUT_FILENO);
      close(devnull);
    }
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }

  close(err_pipe[1]);
  fcntl(err_pipe[0], F_SETFL, O_NONBLOCK);

  ProcessResult result;
  bool child_done = false;
  int status = 0;
  while (true) {
    pollfd pfd{err_pipe[0], POLLIN, 0};
    poll(&pfd, 1, 20);
    char buf[4096];
    ssize_t got;
    while ((got = read(err_pipe[0], buf, sizeof(buf))) > 0) {
      result.stderr_text.append(buf, static_cast<std::size_t>(got));
    }
    const pid_t waited = waitpid(pid, &status, WNOHANG);
    if (waited == pid) {
      child_done = true;
      break;
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (time_limit_s > 0.0 && elapsed > time_limit_s) {
      kill(pid, SIGKILL);
      waitpid(pid, &status, 0);
      result.timed_out = true;
      break;
    }
  }
  // Drain whatever stderr is left.
  char buf[4096];
  ssize_t got;
  while ((got = read(err_pipe[0], buf, sizeof(buf))) > 0) {
    result.stderr_text.append(buf, static_cast<std::size_t>(got));
  }
  close(err_pipe[0]);

  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (child_done) {
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : 128;
  }
  return result;
}

}  // namespace

Solution parse_solution_file(const LpModel& model, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw SolutionParseError("solution file '" + path.string() + "' does not exist");
  }
  Solution solution;
  std::string line;
  int line_no = 0;
  bool saw_status = false;
  bool saw_objective = false;
  std::vector<double> values(model.num_vars(), 0.0);
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = detail::split_whitespace(line);
    if (tokens.empty()) continue;
    if (!saw_status) {
      if (tokens[0] != "status" || tokens.size() != 2) {
        throw SolutionParseError("solution line " + std::to_string(line_no) +
                                 ": expected 'status <word>'");
      }
      const std::string_view word = tokens[1];
      if (word == "optimal") {
        solution.status = SolveStatus::optimal;
      } else if (word == "infeasible") {
        solution.status = SolveStatus::infeasible;
      } else if (word == "unbounded") {
        solution.status = SolveStatus::unbounded;
      } else if (word == "limit") {
        solution.status = SolveStatus::limit;
      } else if (word == "error") {
        solution.status = SolveStatus::error;
      } else {
        throw SolutionParseError("solution line " + std::to_string(line_no) +
                                 ": unknown status '" + std::string(word) + "'");
      }
      saw_status = true;
      continue;
    }
    if (!saw_objective) {
      double value = 0.0;
      if (tokens[0] != "objective" || tokens.size() != 2 ||
          !detail::parse_double(tokens[1], value)) {
        throw SolutionParseError("solution line " + std::to_string(line_no) +
                                 ": expected 'objective <float>'");
      }
      solution.objective = value;
      saw_objective = true;
      continue;
    }
    double value = 0.0;
    if (tokens.size() != 2 || !detail::parse_double(tokens[1], value)) {
      throw SolutionParseError("solution line " + std::to_string(line_no) +
                               ": expected '<variable-name> <value>'");
    }
    const int var = model.find_variable(std::string(tokens[0]));
    if (var < 0) {
      throw SolutionParseError("solution line " + std::to_string(line_no) +
                               ": unknown variable '" + std::string(tokens[0]) + "'");
    }
    values[var] = value;
  }
  if (!saw_status) {
    throw SolutionParseError("solution file '" + path.string() + "' is missing the status line");
  }
  if (!saw_objective) {
    throw SolutionParseError("solution file '" + path.string() +
                             "' is missing the objective line");
  }
  if (solution.status == SolveStatus::optimal || solution.status == SolveStatus::limit) {
    solution.values = std::move(values);
  }
  return solution;
}

Solution solve_external(const LpModel& model, const std::string& command_template,
                        const std::filesystem::path& workdir, double time_limit_s) {
  if (command_template.find("{mps}") == std::string::npos ||
      command_template.find("{sol}") == std::string::npos) {
    throw SpawnError("command template must contain the {mps} and {sol} placeholders");
  }
  std::error_code ec;
  std::filesystem::create_directories(workdir, ec);
  const std::filesystem::path mps_path = workdir / "model.mps";
  const std::filesystem::path sol_path = workdir / "model.sol";
  std::filesystem::remove(sol_path, ec);
  write_mps(model, mps_path);

  std::string command = substitute_all(command_template, "{mps}", mps_path.string());
  command = substitute_all(command, "{sol}", sol_path.string());

  const ProcessResult run = run_shell(command, time_limit_s);
  if (run.timed_out) {
    throw Timeout("external solver exceeded the time limit of " +
                  detail::format_sig9(time_limit_s) + " s");
  }
  if (run.exit_code != 0) {
    throw ExitCodeError("external solver exited with code " + std::to_string(run.exit_code),
                        run.exit_code, run.stderr_text);
  }

  Solution solution = parse_solution_file(model, sol_path);
  solution.solve_seconds = run.seconds;
  return solution;
}

}  // namespace ldslab
