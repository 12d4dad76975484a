#include "doctest.h"

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/steady_timer.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "deorbit/session/server.hpp"
#include "deorbit/session/session.hpp"

using namespace deorbit;
namespace fs = std::filesystem;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace asio = boost::asio;
using tcp = asio::ip::tcp;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("deorbit-srv-" + tag + "-" + make_session_id());
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

ServerOptions options(const fs::path& data) {
    ServerOptions o;
    o.port = 0;
    o.session.data_dir = data;
    return o;
}

// Blocking client for request/response style exchanges.
class Client {
public:
    explicit Client(unsigned short port) : ws_(ioc_) {
        tcp::resolver resolver(ioc_);
        asio::connect(ws_.next_layer(), resolver.resolve("127.0.0.1", std::to_string(port)));
        ws_.handshake("127.0.0.1", "/");
    }

    void send(const std::string& text) { ws_.write(asio::buffer(text)); }

    Json recv() {
        beast::flat_buffer b;
        ws_.read(b);
        return Json::parse(beast::buffers_to_string(b.data()));
    }

    // Reads until a message of `kind` arrives; returns it and counts what was skipped.
    Json recv_kind(const std::string& kind, int* skipped = nullptr) {
        for (;;) {
            Json j = recv();
            if (j.at("kind") == kind) return j;
            if (skipped) ++*skipped;
        }
    }

    void close() { ws_.close(websocket::close_code::normal); }

private:
    asio::io_context ioc_;
    websocket::stream<tcp::socket> ws_;
};

http::response<http::string_body> http_get(unsigned short port, const std::string& target) {
    asio::io_context ioc;
    tcp::resolver resolver(ioc);
    beast::tcp_stream stream(ioc);
    stream.connect(resolver.resolve("127.0.0.1", std::to_string(port)));
    http::request<http::empty_body> req{http::verb::get, target, 11};
    req.set(http::field::host, "127.0.0.1");
    http::write(stream, req);
    beast::flat_buffer b;
    http::response<http::string_body> res;
    http::read(stream, b, res);
    return res;
}

}  // namespace

TEST_CASE("a trial over a real WebSocket") {
    TempDir dir("ws");
    Server server(options(dir.path));
    server.start();
    Client c(server.port());

    c.send(R"({"kind":"hello"})");
    const Json err = c.recv();
    CHECK(err.at("kind") == "error");
    CHECK(err.at("code") == "unknown_kind");

    c.send(R"({"kind":"start","view":"bottom","cohort":"pilot"})");
    const Json first = c.recv();
    CHECK(first.at("kind") == "telemetry");
    CHECK(first.at("tick") == 0);
    CHECK_FALSE(first.contains("err"));
    CHECK(first.at("obs").at("earth_visible") == true);

    c.send(R"({"kind":"stick","t":0,"x":1.5,"y":0,"z":0})");
    Json t;
    for (int i = 0; i < 20; ++i) t = c.recv_kind("telemetry");
    CHECK(t.at("stick")[0] == 1.0);
    CHECK(t.at("t").get<double>() > 0.3);

    c.send(R"({"kind":"abort"})");
    const Json result = c.recv_kind("result");
    CHECK(result.at("success") == false);
    CHECK(result.at("view") == "bottom");

    c.send(R"({"kind":"stick","x":0,"y":0,"z":0})");
    CHECK(c.recv_kind("error").at("code") == "session_terminal");
    c.close();

    server.stop();
    const ServerStats st = server.stats();
    CHECK(st.connections == 1);
    CHECK(st.sessions_started == 1);
    CHECK(st.stick_messages == 1);

    int logs = 0;
    for (const auto& e : fs::directory_iterator(dir.path)) logs += e.path().extension() == ".jsonl" ? 1 : 0;
    CHECK(logs == 1);
}

TEST_CASE("dropping the connection aborts the trial") {
    TempDir dir("drop");
    Server server(options(dir.path));
    server.start();
    {
        Client c(server.port());
        c.send(R"({"kind":"start","view":"front","cohort":"civilian"})");
        c.recv_kind("telemetry");
        c.close();
    }
    fs::path result;
    for (int i = 0; i < 200 && result.empty(); ++i) {
        for (const auto& e : fs::directory_iterator(dir.path))
            if (e.path().string().ends_with(".result.json")) result = e.path();
        if (result.empty()) std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    REQUIRE_FALSE(result.empty());
    std::ifstream in(result);
    CHECK(Json::parse(in).at("success") == false);
    server.stop();
}

TEST_CASE("static cockpit files") {
    TempDir dir("static");
    fs::create_directories(dir.path / "www");
    std::ofstream(dir.path / "www" / "index.html") << "<html>cockpit</html>";
    std::ofstream(dir.path / "secret.txt") << "no";
    ServerOptions o = options(dir.path / "data");
    o.static_dir = dir.path / "www";
    Server server(o);
    server.start();

    const auto index = http_get(server.port(), "/");
    CHECK(index.result() == http::status::ok);
    CHECK(index.body() == "<html>cockpit</html>");
    CHECK(std::string(index[http::field::content_type]).starts_with("text/html"));
    CHECK(http_get(server.port(), "/../secret.txt").result() == http::status::not_found);
    CHECK(http_get(server.port(), "/missing.js").result() == http::status::not_found);
    server.stop();
}

TEST_CASE("a 1 kHz stick flood is absorbed by the latch") {
    TempDir dir("flood");
    Server server(options(dir.path));
    server.start();

    asio::io_context ioc;
    websocket::stream<beast::tcp_stream> ws(ioc);
    tcp::resolver resolver(ioc);
    ws.next_layer().connect(resolver.resolve("127.0.0.1", std::to_string(server.port())));
    ws.handshake("127.0.0.1", "/");

    const auto flood_for = std::chrono::seconds(2);
    std::string pending = R"({"kind":"start","view":"bottom","cohort":"pilot"})";
    std::chrono::steady_clock::time_point started, stopped;
    bool writing = false, finished = false;
    int sent = 0, telemetry = 0;
    std::string last_result;
    beast::flat_buffer rbuf;
    asio::steady_timer timer(ioc);
    std::string wbuf;

    std::function<void()> do_read = [&] {
        ws.async_read(rbuf, [&](beast::error_code ec, std::size_t) {
            if (ec) return;
            const Json j = Json::parse(beast::buffers_to_string(rbuf.data()));
            rbuf.consume(rbuf.size());
            if (j.at("kind") == "telemetry") ++telemetry;
            if (j.at("kind") == "result") {
                last_result = j.dump();
                finished = true;
                timer.cancel();
                ws.async_close(websocket::close_code::normal, [](beast::error_code) {});
                return;
            }
            do_read();
        });
    };

    std::function<void()> tick = [&] {
        if (finished) return;
        const auto now = std::chrono::steady_clock::now();
        if (!writing) {
            if (!pending.empty()) {
                wbuf = pending;
                pending.clear();
                started = now;
            } else if (now - started < flood_for) {
                const double x = ((sent % 200) - 100) / 100.0;
                wbuf = Json{{"kind", "stick"}, {"x", x}, {"y", 0.0}, {"z", 0.0}, {"t", sent * 1e-3}}.dump();
                ++sent;
            } else if (stopped == std::chrono::steady_clock::time_point{}) {
                wbuf = R"({"kind":"abort"})";
                stopped = now;
            } else {
                wbuf.clear();
            }
            if (!wbuf.empty()) {
                writing = true;
                ws.async_write(asio::buffer(wbuf), [&](beast::error_code ec, std::size_t) {
                    writing = false;
                    if (ec) finished = true;
                });
            }
        }
        timer.expires_after(std::chrono::milliseconds(1));
        timer.async_wait([&](beast::error_code ec) {
            if (!ec) tick();
        });
    };

    do_read();
    tick();
    ioc.run_for(std::chrono::seconds(10));
    REQUIRE(finished);
    server.stop();

    const ServerStats st = server.stats();
    const double elapsed = std::chrono::duration<double>(stopped - started).count();
    const double expected_ticks = elapsed / kInteractiveDt;
    MESSAGE("sent " << sent << " sticks over " << elapsed << " s; ticks " << st.ticks << ", max queue "
                    << st.max_write_queue << ", max backlog " << st.max_tick_backlog);

    CHECK(sent > 1000);
    CHECK(st.stick_messages == static_cast<std::uint64_t>(sent));
    // Simulated time keeps pace with wall time: no lag growth under load.
    CHECK(static_cast<double>(st.ticks) == doctest::Approx(expected_ticks).epsilon(0.15));
    CHECK(st.max_write_queue <= 8);
    CHECK(telemetry == doctest::Approx(st.ticks * 30.0 * kInteractiveDt).epsilon(0.1));

    // One latched input per tick reached the simulator; the rest were overwritten.
    std::size_t inputs = 0;
    for (const auto& e : fs::directory_iterator(dir.path)) {
        if (e.path().extension() != ".jsonl") continue;
        std::ifstream in(e.path());
        for (std::string line; std::getline(in, line);) inputs += line.find(R"("kind":"input")") != std::string::npos;
    }
    CHECK(inputs == st.ticks);
    CHECK(st.stick_messages > 5 * inputs);
}
