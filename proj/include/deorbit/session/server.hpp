#pragma once

// WebSocket session server. Each connection runs its own SessionController on
// a shared single-threaded event loop: client frames are handled as they
// arrive, the simulation ticks on a steady timer and telemetry is written
// back through a per-connection queue.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "deorbit/session/session.hpp"

namespace deorbit {

struct ServerOptions {
    std::string address = "127.0.0.1";
    unsigned short port = 8080;  // 0 picks a free port
    SessionOptions session{};
    TaskConfig defaults{};
    double speed = 1.0;  // simulated seconds per wall second
    std::optional<std::filesystem::path> static_dir;  // plain HTTP GETs are served from here
};

struct ServerStats {
    std::uint64_t connections = 0;
    std::uint64_t sessions_started = 0;
    std::uint64_t messages_in = 0;
    std::uint64_t stick_messages = 0;
    std::uint64_t ticks = 0;
    std::uint64_t messages_out = 0;
    std::uint64_t max_write_queue = 0;   // deepest outbound queue seen on any connection
    std::uint64_t max_tick_backlog = 0;  // most overdue ticks processed in one timer wake-up
};

class Server {
public:
    explicit Server(ServerOptions opt);
    ~Server();

    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    /// Bound port (useful with port 0).
    unsigned short port() const;

    /// Runs the event loop on the calling thread until stop().
    void run();
    /// Runs the event loop on a background thread.
    void start();
    /// Stops the loop and joins the background thread, if any. Running sessions are aborted.
    void stop();

    ServerStats stats() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace deorbit
