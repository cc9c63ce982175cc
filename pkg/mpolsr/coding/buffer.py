"""
Sending buffer and receiving assembler around the Mojette codec.

The sender collects a group of original payloads, concatenates them and
encodes the group into N descriptions tagged (group_id, description
index). The receiver decodes a group as soon as M distinct descriptions
of it have arrived.

Author: Alberto Barrago
License: BSD 3-Clause License - 2025
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, Iterator, List, Optional, Set, Tuple

from mpolsr.coding.mojette import CodecConfig, Description, decode, encode


@dataclass(frozen=True)
class EncodedGroup:
    """Descriptions of one group plus what is needed to split it back."""

    group_id: int
    member_sizes: Tuple[int, ...]
    members: Tuple[Any, ...]
    descriptions: Tuple[Description, ...]

    def split(self, payload: bytes) -> List[bytes]:
        return split_group(payload, self.member_sizes)


def split_group(payload: bytes, member_sizes: Iterable[int]) -> List[bytes]:
    """Cut a decoded group payload back into the original payloads."""
    parts = []
    offset = 0
    for size in member_sizes:
        parts.append(payload[offset : offset + size])
        offset += size
    return parts


@dataclass
class GroupBuffer:
    """
    Sender-side buffer of one flow.

    `members` tags (any value) travel alongside each payload so the caller
    can account for the original packets of a group.
    """

    config: CodecConfig
    group_size: int
    next_group: int = 0
    _payloads: List[bytes] = field(default_factory=list)
    _members: List[Any] = field(default_factory=list)

    def __post_init__(self):
        if self.group_size < 1:
            raise ValueError("group_size must be >= 1")

    @property
    def pending(self) -> int:
        return len(self._payloads)

    @property
    def open_group(self) -> int:
        return self.next_group

    def add(self, payload: bytes, member: Any = None) -> Optional[EncodedGroup]:
        """Buffer one payload; returns the encoded group once it is full."""
        self._payloads.append(bytes(payload))
        self._members.append(member)
        if len(self._payloads) >= self.group_size:
            return self.flush()
        return None

    def flush(self) -> Optional[EncodedGroup]:
        """Encode whatever is buffered as a (possibly short) group."""
        if not self._payloads:
            return None
        group_id = self.next_group
        self.next_group += 1
        payloads, members = self._payloads, self._members
        self._payloads, self._members = [], []
        return EncodedGroup(
            group_id=group_id,
            member_sizes=tuple(len(p) for p in payloads),
            members=tuple(members),
            descriptions=tuple(encode(b"".join(payloads), self.config, group_id=group_id)),
        )


@dataclass
class GroupAssembler:
    """Receiver-side collector of one flow."""

    config: CodecConfig
    received: Dict[int, Dict[int, Description]] = field(default_factory=dict)
    decoded: Set[int] = field(default_factory=set)

    def offer(self, description: Description) -> Optional[bytes]:
        """
        Store a description; returns the group payload the first time the
        group reaches M distinct descriptions, None otherwise.
        """
        group = description.group_id
        if group in self.decoded:
            return None
        held = self.received.setdefault(group, {})
        held.setdefault(description.p, description)
        if len(held) < self.config.m_required:
            return None
        payload = decode(held.values(), self.config)
        self.decoded.add(group)
        del self.received[group]
        return payload


def buffer_and_encode(
    payloads: Iterable[bytes], group_size: int, config: CodecConfig
) -> Iterator[EncodedGroup]:
    """Group a payload stream and encode each group; the tail is flushed short."""
    buffer = GroupBuffer(config, group_size)
    for payload in payloads:
        group = buffer.add(payload)
        if group is not None:
            yield group
    tail = buffer.flush()
    if tail is not None:
        yield tail
