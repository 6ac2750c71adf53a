"""Bit accounting for simulated number-in-hand protocol runs."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Message:
    player: int
    bits: int
    tag: str


@dataclass
class Transcript:
    k: int
    bits_per_player: list[int] = field(default_factory=list)
    messages: list[Message] = field(default_factory=list)
    output: tuple[int, int] | None = None

    def __post_init__(self):
        if not self.bits_per_player:
            self.bits_per_player = [0] * self.k
        if len(self.bits_per_player) != self.k:
            raise ValueError("bits_per_player must have one entry per player")

    def send(self, player: int, bits: int, tag: str) -> None:
        if not 0 <= player < self.k:
            raise ValueError(f"no player {player} among {self.k}")
        if bits < 0:
            raise ValueError("negative message length")
        self.messages.append(Message(player, int(bits), tag))
        self.bits_per_player[player] += int(bits)

    def extend(self, other: Transcript, prefix: str = "") -> None:
        if other.k != self.k:
            raise ValueError("player counts differ")
        for msg in other.messages:
            self.send(msg.player, msg.bits, prefix + msg.tag)

    @property
    def total_bits(self) -> int:
        return sum(self.bits_per_player)

    def is_consistent(self) -> bool:
        totals = [0] * self.k
        for msg in self.messages:
            totals[msg.player] += msg.bits
        return totals == self.bits_per_player

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "bits_per_player": list(self.bits_per_player),
            "total_bits": self.total_bits,
            "messages": [[m.player, m.bits, m.tag] for m in self.messages],
            "output": list(self.output) if self.output is not None else None,
        }
