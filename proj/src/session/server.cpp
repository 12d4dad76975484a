#include "deorbit/session/server.hpp"

#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/signal_set.hpp>
#include <boost/asio/steady_timer.hpp>
#include <boost/asio/strand.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <deque>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "deorbit/errors.hpp"

namespace deorbit {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace asio = boost::asio;
using tcp = asio::ip::tcp;

namespace {

struct AtomicStats {
    std::atomic<std::uint64_t> connections{0}, sessions_started{0}, messages_in{0}, stick_messages{0}, ticks{0},
        messages_out{0}, max_write_queue{0}, max_tick_backlog{0};

    static void raise(std::atomic<std::uint64_t>& a, std::uint64_t v) {
        std::uint64_t cur = a.load();
        while (v > cur && !a.compare_exchange_weak(cur, v)) {
        }
    }
};

std::string_view mime_type(const std::filesystem::path& p) {
    const std::string ext = p.extension().string();
    if (ext == ".html" || ext == ".htm") return "text/html; charset=utf-8";
    if (ext == ".js" || ext == ".mjs") return "text/javascript; charset=utf-8";
    if (ext == ".css") return "text/css; charset=utf-8";
    if (ext == ".json") return "application/json";
    if (ext == ".svg") return "image/svg+xml";
    if (ext == ".png") return "image/png";
    if (ext == ".jpg" || ext == ".jpeg") return "image/jpeg";
    if (ext == ".wasm") return "application/wasm";
    return "application/octet-stream";
}

// Resolves a request target inside `root`, or nullopt for anything escaping it.
std::optional<std::filesystem::path> resolve_static(const std::filesystem::path& root, std::string_view target) {
    std::string path(target.substr(0, target.find_first_of("?#")));
    if (path.empty() || path.front() != '/') return std::nullopt;
    if (path.back() == '/') path += "index.html";
    const std::filesystem::path rel = std::filesystem::path(path.substr(1)).lexically_normal();
    if (rel.empty() || rel.is_absolute() || *rel.begin() == "..") return std::nullopt;
    return root / rel;
}

class WsConnection : public std::enable_shared_from_this<WsConnection> {
public:
    WsConnection(tcp::socket&& socket, const ServerOptions& opt, AtomicStats& stats)
        : ws_(std::move(socket)),
          timer_(ws_.get_executor()),
          controller_(opt.session, opt.defaults),
          stats_(stats),
          period_(std::chrono::duration_cast<std::chrono::steady_clock::duration>(
              std::chrono::duration<double>(opt.session.dt / opt.speed))) {}

    ~WsConnection() {
        try {
            controller_.disconnect();
        } catch (...) {
        }
    }

    void accept(http::request<http::string_body> req) {
        ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
        ws_.async_accept(req, beast::bind_front_handler(&WsConnection::on_accept, shared_from_this()));
    }

private:
    void on_accept(beast::error_code ec) {
        if (ec) return;
        ++stats_.connections;
        ws_.text(true);
        read();
    }

    void read() { ws_.async_read(buffer_, beast::bind_front_handler(&WsConnection::on_read, shared_from_this())); }

    void on_read(beast::error_code ec, std::size_t) {
        if (ec) {
            closed_ = true;
            timer_.cancel();
            controller_.disconnect();
            return;
        }
        const std::string text = beast::buffers_to_string(buffer_.data());
        buffer_.consume(buffer_.size());
        ++stats_.messages_in;

        const bool was_running = controller_.running();
        const std::uint64_t started = controller_.sessions_started();
        const std::uint64_t sticks = controller_.stick_messages();
        send(controller_.handle(text));
        stats_.sessions_started += controller_.sessions_started() - started;
        stats_.stick_messages += controller_.stick_messages() - sticks;
        if (!was_running && controller_.running()) {
            next_deadline_ = std::chrono::steady_clock::now() + period_;
            arm_timer();
        }
        read();
    }

    void arm_timer() {
        timer_.expires_at(next_deadline_);
        timer_.async_wait(beast::bind_front_handler(&WsConnection::on_timer, shared_from_this()));
    }

    void on_timer(beast::error_code ec) {
        if (ec || closed_ || !controller_.running()) return;
        // Catch up on overdue ticks so simulated time tracks wall time; the
        // latched stick is reused for any extra ticks in this wake-up.
        constexpr std::uint64_t kMaxCatchUp = 5;
        std::uint64_t n = 0;
        const auto now = std::chrono::steady_clock::now();
        while (controller_.running() && next_deadline_ <= now && n < kMaxCatchUp) {
            send(controller_.tick());
            ++stats_.ticks;
            next_deadline_ += period_;
            ++n;
        }
        AtomicStats::raise(stats_.max_tick_backlog, n);
        if (n == kMaxCatchUp && next_deadline_ <= now) next_deadline_ = now + period_;  // drop hopeless backlog
        if (controller_.running()) arm_timer();
    }

    void send(const std::vector<Json>& msgs) {
        for (const Json& m : msgs) queue_.push_back(m.dump());
        AtomicStats::raise(stats_.max_write_queue, queue_.size());
        if (!writing_ && !queue_.empty()) write_next();
    }

    void write_next() {
        writing_ = true;
        ws_.async_write(asio::buffer(queue_.front()),
                        beast::bind_front_handler(&WsConnection::on_write, shared_from_this()));
    }

    void on_write(beast::error_code ec, std::size_t) {
        writing_ = false;
        if (ec) {
            queue_.clear();
            return;
        }
        ++stats_.messages_out;
        queue_.pop_front();
        if (!queue_.empty()) write_next();
    }

    websocket::stream<beast::tcp_stream> ws_;
    asio::steady_timer timer_;
    beast::flat_buffer buffer_;
    SessionController controller_;
    AtomicStats& stats_;
    std::chrono::steady_clock::duration period_;
    std::chrono::steady_clock::time_point next_deadline_{};
    std::deque<std::string> queue_;
    bool writing_ = false;
    bool closed_ = false;
};

class HttpConnection : public std::enable_shared_from_this<HttpConnection> {
public:
    HttpConnection(tcp::socket&& socket, const ServerOptions& opt, AtomicStats& stats)
        : stream_(std::move(socket)), opt_(opt), stats_(stats) {}

    void run() {
        stream_.expires_after(std::chrono::seconds(30));
        http::async_read(stream_, buffer_, req_, beast::bind_front_handler(&HttpConnection::on_read, shared_from_this()));
    }

private:
    void on_read(beast::error_code ec, std::size_t) {
        if (ec) return;
        if (websocket::is_upgrade(req_)) {
            stream_.expires_never();
            std::make_shared<WsConnection>(stream_.release_socket(), opt_, stats_)->accept(std::move(req_));
            return;
        }
        respond();
    }

    void respond() {
        auto res = std::make_shared<http::response<http::string_body>>();
        res->version(req_.version());
        res->keep_alive(false);
        res->set(http::field::server, "deorbit");
        const auto file = opt_.static_dir ? resolve_static(*opt_.static_dir, std::string_view(req_.target().data(), req_.target().size())) : std::nullopt;
        std::ifstream in;
        if (req_.method() != http::verb::get && req_.method() != http::verb::head) {
            res->result(http::status::method_not_allowed);
        } else if (file && std::filesystem::is_regular_file(*file) && (in.open(*file, std::ios::binary), in)) {
            std::ostringstream body;
            body << in.rdbuf();
            res->result(http::status::ok);
            res->set(http::field::content_type, std::string(mime_type(*file)));
            if (req_.method() == http::verb::get) res->body() = body.str();
        } else {
            res->result(http::status::not_found);
            res->set(http::field::content_type, "text/plain");
            res->body() = "not found\n";
        }
        res->prepare_payload();
        http::async_write(stream_, *res, [self = shared_from_this(), res](beast::error_code, std::size_t) {
            beast::error_code ignored;
            self->stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
        });
    }

    beast::tcp_stream stream_;
    const ServerOptions& opt_;
    AtomicStats& stats_;
    beast::flat_buffer buffer_;
    http::request<http::string_body> req_;
};

}  // namespace

struct Server::Impl {
    explicit Impl(ServerOptions o) : opt(std::move(o)), acceptor(ioc) {
        if (!(opt.speed > 0.0)) throw ValidationError("speed must be positive");
        if (!(opt.session.dt > 0.0)) throw ValidationError("dt must be positive");
        std::filesystem::create_directories(opt.session.data_dir);
        const tcp::endpoint ep(asio::ip::make_address(opt.address), opt.port);
        acceptor.open(ep.protocol());
        acceptor.set_option(asio::socket_base::reuse_address(true));
        acceptor.bind(ep);
        acceptor.listen(asio::socket_base::max_listen_connections);
        do_accept();
    }

    void do_accept() {
        acceptor.async_accept(asio::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
            if (ec) return;  // acceptor closed
            std::make_shared<HttpConnection>(std::move(socket), opt, stats)->run();
            do_accept();
        });
    }

    ServerOptions opt;
    AtomicStats stats;  // declared before the io_context: connections outlive nothing that they reference
    asio::io_context ioc{1};
    tcp::acceptor acceptor;
    std::thread thread;
};

Server::Server(ServerOptions opt) : impl_(std::make_unique<Impl>(std::move(opt))) {}

Server::~Server() { stop(); }

unsigned short Server::port() const { return impl_->acceptor.local_endpoint().port(); }

void Server::run() {
    asio::signal_set signals(impl_->ioc, SIGINT, SIGTERM);
    signals.async_wait([this](beast::error_code ec, int) {
        if (ec) return;
        beast::error_code ignored;
        impl_->acceptor.close(ignored);
        impl_->ioc.stop();
    });
    impl_->ioc.run();
}

void Server::start() {
    impl_->thread = std::thread([this] { impl_->ioc.run(); });
}

void Server::stop() {
    if (!impl_) return;
    asio::post(impl_->ioc, [this] {
        beast::error_code ec;
        impl_->acceptor.close(ec);
        impl_->ioc.stop();
    });
    if (impl_->thread.joinable()) impl_->thread.join();
}

ServerStats Server::stats() const {
    const AtomicStats& s = impl_->stats;
    return {s.connections.load(),  s.sessions_started.load(), s.messages_in.load(),     s.stick_messages.load(),
            s.ticks.load(),        s.messages_out.load(),     s.max_write_queue.load(), s.max_tick_backlog.load()};
}

}  // namespace deorbit
