#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "tarmac/packet.hpp"
#include "tarmac/topology.hpp"

namespace tarmac {

class Simulation;
struct TransmissionRecord;

// Link-layer PDU for the unicast protocols. Everything is physically
// broadcast; addressing lives in the header fields.
struct UnicastPdu {
  enum class Type : std::uint8_t { Rts, Cts, Data, Ack, Dummy, Beacon };
  Type type = Type::Data;
  NodeId from = 0;
  NodeId to = 0;
  std::optional<DataPacket> packet;        // Data only
  std::vector<std::uint32_t> release_ids;  // Beacon: recently delivered ids
  std::uint32_t exchange_id = 0;           // matches RTS/CTS/DATA/ACK legs
};

using Payload = std::variant<TarmacFrame, UnicastPdu>;

// One protocol instance per node, owned by the simulation and mutated only
// inside event handlers.
class MacBase {
 public:
  MacBase(Simulation& sim, NodeId self) : sim_(sim), self_(self) {}
  virtual ~MacBase() = default;

  virtual void start() = 0;
  virtual void on_packet_arrival(DataPacket packet) = 0;
  // Called for every transmission this node received cleanly (outcome
  // Received), including frames merely overheard.
  virtual void on_receive(const Payload& payload,
                          const TransmissionRecord& record) = 0;
  // Data packets still buffered/held here at end of run.
  virtual void collect_live_packets(std::vector<std::uint32_t>& out) const = 0;

  NodeId self() const { return self_; }

 protected:
  Simulation& sim_;
  NodeId self_;
};

}  // namespace tarmac
