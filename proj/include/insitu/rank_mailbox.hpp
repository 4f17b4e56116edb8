#pragma once

#include <condition_variable>
#include <cstddef>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "insitu/grid.hpp"

namespace insitu {

/// Addressed block of values travelling between two ranks.
struct Message {
  std::size_t source = 0;
  std::size_t destination = 0;
  std::vector<Complex> payload;
};

/**
 * In-process stand-in for a communicator: one inbound queue per
 * (destination, source) pair. Messages on a pair are delivered in send order.
 *
 * abort() wakes every blocked receiver with a UsageError; used when one rank
 * fails so the others do not wait forever.
 */
class RankMailbox {
public:
  explicit RankMailbox(std::size_t ranks);

  std::size_t ranks() const noexcept { return inboxes_.size(); }

  void send(Message message);
  /// Blocks until a message from `source` is queued for `destination`.
  Message receive(std::size_t destination, std::size_t source);
  void abort();

private:
  struct Inbox {
    std::mutex mutex;
    std::condition_variable ready;
    std::vector<std::deque<Message>> from; // indexed by source rank
    bool aborted = false;
  };

  Inbox& inbox(std::size_t rank);

  std::vector<std::unique_ptr<Inbox>> inboxes_;
};

/// What a worker sees of its communicator.
class RankContext {
public:
  RankContext(RankMailbox& mailbox, std::size_t rank)
      : mailbox_(mailbox), rank_(rank) {}

  std::size_t rank() const noexcept { return rank_; }
  std::size_t size() const noexcept { return mailbox_.ranks(); }

  void send(std::size_t destination, std::vector<Complex> payload) {
    mailbox_.send({rank_, destination, std::move(payload)});
  }
  std::vector<Complex> receive(std::size_t source) {
    return mailbox_.receive(rank_, source).payload;
  }

private:
  RankMailbox& mailbox_;
  std::size_t rank_;
};

/**
 * Runs `body` on `ranks` concurrent workers sharing one mailbox and joins
 * them all before returning. If any worker throws, the mailbox is aborted and
 * the lowest-ranked original exception is rethrown.
 */
void run_ranks(std::size_t ranks, const std::function<void(RankContext&)>& body);

/**
 * Global transpose, called collectively by every rank.
 *
 * `local` is this rank's slab (per local_slab) of a rows x cols row-major
 * grid. Returns this rank's slab of the cols x rows transposed grid. Ranks
 * owning zero rows still take part with empty payloads.
 */
std::vector<Complex> transpose_slab(RankContext& ctx,
                                    std::span<const Complex> local,
                                    std::size_t rows, std::size_t cols);

} // namespace insitu
