"""LZW dictionary coder over the byte alphabet.

The dictionary starts with the 256 single-byte strings and grows by one
entry per emitted code until it holds ``MAX_ENTRIES``; from then on it is
frozen.  There are no clear codes and no early change.
"""

from __future__ import annotations

from .errors import BadCode

ALPHABET_SIZE = 256
MAX_ENTRIES = 1 << 16


def lzw_encode(data, trace=None) -> list[int]:
    """Encode ``data`` into a list of dictionary codes.

    When ``trace`` is a list, one ``(code, new_entry)`` pair is appended per
    emitted code; ``new_entry`` is ``(index, phrase_bytes)`` or ``None``.
    """
    data = bytes(data)
    if not data:
        return []
    # keyed by (prefix code << 8 | next byte)
    table: dict[int, int] = {}
    next_code = ALPHABET_SIZE
    codes = []
    emit = codes.append
    get = table.get

    if trace is None:
        cur = data[0]
        for b in data[1:]:
            key = (cur << 8) | b
            nxt = get(key)
            if nxt is not None:
                cur = nxt
                continue
            emit(cur)
            if next_code < MAX_ENTRIES:
                table[key] = next_code
                next_code += 1
            cur = b
        emit(cur)
        return codes

    # same loop, with phrases materialized for the trace
    phrases = [bytes([i]) for i in range(ALPHABET_SIZE)]
    cur = data[0]
    for b in data[1:]:
        key = (cur << 8) | b
        nxt = get(key)
        if nxt is not None:
            cur = nxt
            continue
        emit(cur)
        entry = None
        if next_code < MAX_ENTRIES:
            table[key] = next_code
            phrases.append(phrases[cur] + bytes([b]))
            entry = (next_code, phrases[next_code])
            next_code += 1
        trace.append((cur, entry))
        cur = b
    emit(cur)
    trace.append((cur, None))
    return codes


def dictionary_size(n_codes: int) -> int:
    """Entries held by the encoder after emitting ``n_codes`` codes."""
    if n_codes == 0:
        return ALPHABET_SIZE
    return min(ALPHABET_SIZE + n_codes - 1, MAX_ENTRIES)


def lzw_decode(codes) -> bytes:
    """Invert :func:`lzw_encode`.

    A code equal to the next unassigned index is the deferred-entry case and
    decodes to the previous phrase plus its own first byte.
    """
    entries = [bytes([i]) for i in range(ALPHABET_SIZE)]
    out = []
    prev = None
    for i, code in enumerate(codes):
        n = len(entries)
        if 0 <= code < n:
            cur = entries[code]
        elif code == n and prev is not None and n < MAX_ENTRIES:
            cur = prev + prev[:1]
        else:
            raise BadCode(f"code {code} at position {i} exceeds next unassigned index {n}")
        if prev is not None and n < MAX_ENTRIES:
            entries.append(prev + cur[:1])
        out.append(cur)
        prev = cur
    return b"".join(out)
