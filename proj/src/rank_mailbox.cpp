#include "insitu/rank_mailbox.hpp"

#include <algorithm>
#include <thread>

namespace insitu {

RankMailbox::RankMailbox(std::size_t ranks) {
  if (ranks == 0) {
    throw RankError("mailbox needs at least one rank");
  }
  inboxes_.reserve(ranks);
  for (std::size_t r = 0; r < ranks; ++r) {
    auto box = std::make_unique<Inbox>();
    box->from.resize(ranks);
    inboxes_.push_back(std::move(box));
  }
}

RankMailbox::Inbox& RankMailbox::inbox(std::size_t rank) {
  if (rank >= inboxes_.size()) {
    throw RankError("rank " + std::to_string(rank) + " out of range for " +
                    std::to_string(inboxes_.size()) + " ranks");
  }
  return *inboxes_[rank];
}

void RankMailbox::send(Message message) {
  if (message.source >= ranks()) {
    throw RankError("source rank " + std::to_string(message.source) +
                    " out of range");
  }
  Inbox& box = inbox(message.destination);
  {
    std::lock_guard lock(box.mutex);
    box.from[message.source].push_back(std::move(message));
  }
  box.ready.notify_all();
}

Message RankMailbox::receive(std::size_t destination, std::size_t source) {
  Inbox& box = inbox(destination);
  if (source >= ranks()) {
    throw RankError("source rank " + std::to_string(source) + " out of range");
  }
  std::unique_lock lock(box.mutex);
  auto& queue = box.from[source];
  box.ready.wait(lock, [&] { return box.aborted || !queue.empty(); });
  if (queue.empty()) {
    throw UsageError("mailbox aborted while rank " +
                     std::to_string(destination) + " waited on rank " +
                     std::to_string(source));
  }
  Message message = std::move(queue.front());
  queue.pop_front();
  return message;
}

void RankMailbox::abort() {
  for (auto& box : inboxes_) {
    {
      std::lock_guard lock(box->mutex);
      box->aborted = true;
    }
    box->ready.notify_all();
  }
}

void run_ranks(std::size_t ranks,
               const std::function<void(RankContext&)>& body) {
  RankMailbox mailbox(ranks);
  std::vector<std::exception_ptr> errors(ranks);
  {
    std::vector<std::jthread> workers;
    workers.reserve(ranks);
    for (std::size_t r = 0; r < ranks; ++r) {
      workers.emplace_back([&, r] {
        RankContext ctx(mailbox, r);
        try {
          body(ctx);
        } catch (...) {
          errors[r] = std::current_exception();
          mailbox.abort();
        }
      });
    }
  }
  // An abort makes innocent ranks fail too; prefer a non-abort error.
  std::exception_ptr first;
  for (const auto& error : errors) {
    if (!error) {
      continue;
    }
    try {
      std::rethrow_exception(error);
    } catch (const UsageError&) {
      if (!first) {
        first = error;
      }
    } catch (...) {
      std::rethrow_exception(error);
    }
  }
  if (first) {
    std::rethrow_exception(first);
  }
}

std::vector<Complex> transpose_slab(RankContext& ctx,
                                    std::span<const Complex> local,
                                    std::size_t rows, std::size_t cols) {
  const std::size_t ranks = ctx.size();
  const Slab mine = local_slab(rows, ranks, ctx.rank());
  if (local.size() != mine.local_n0 * cols) {
    throw DimensionError("rank " + std::to_string(ctx.rank()) + " slab holds " +
                         std::to_string(local.size()) + " values, expected " +
                         std::to_string(mine.local_n0 * cols));
  }

  // Block for rank d: my rows restricted to d's columns, stored column-major
  // so the receiver copies contiguous runs.
  for (std::size_t d = 0; d < ranks; ++d) {
    const Slab theirs = local_slab(cols, ranks, d);
    std::vector<Complex> block(theirs.local_n0 * mine.local_n0);
    for (std::size_t c = 0; c < theirs.local_n0; ++c) {
      for (std::size_t i = 0; i < mine.local_n0; ++i) {
        block[c * mine.local_n0 + i] = local[i * cols + theirs.local_0_start + c];
      }
    }
    ctx.send(d, std::move(block));
  }

  const Slab target = local_slab(cols, ranks, ctx.rank());
  std::vector<Complex> out(target.local_n0 * rows);
  for (std::size_t s = 0; s < ranks; ++s) {
    const Slab source = local_slab(rows, ranks, s);
    std::vector<Complex> block = ctx.receive(s);
    if (block.size() != target.local_n0 * source.local_n0) {
      throw DimensionError("transpose block from rank " + std::to_string(s) +
                           " has unexpected size");
    }
    for (std::size_t c = 0; c < target.local_n0; ++c) {
      std::copy_n(block.begin() + static_cast<std::ptrdiff_t>(c * source.local_n0),
                  source.local_n0,
                  out.begin() + static_cast<std::ptrdiff_t>(
                                    c * rows + source.local_0_start));
    }
  }
  return out;
}

} // namespace insitu
