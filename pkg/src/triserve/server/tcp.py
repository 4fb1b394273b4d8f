"""TCP frontend: one JSON object per line, strict request/response pairing.

Each connection is served strictly in arrival order: the next request is not
read until the previous response went out.  Malformed frames get an error
response when an id could be recovered and otherwise close the connection.
A connection that sent subscribe_events additionally receives event frames
(no "id" field) interleaved between responses.
"""

import asyncio
import contextlib

from .core import LauncherService
from .protocol import MAX_FRAME_BYTES, ProtocolError, parse_request, serialize


async def handle_connection(service: LauncherService, reader, writer):
    subscription = None
    push_task = None
    write_lock = asyncio.Lock()

    async def send(doc):
        # responses and pushed events share the socket, one frame at a time
        async with write_lock:
            writer.write(serialize(doc))
            await writer.drain()

    async def push_events(queue):
        while True:
            doc = await queue.get()
            if doc.get("type") == "event":
                await send(doc)

    try:
        while not service.stopping:
            try:
                line = await reader.readline()
            except (ConnectionResetError, asyncio.LimitOverrunError, ValueError):
                break
            if not line:
                break
            if line.strip() == b"":
                continue
            try:
                request = parse_request(line)
            except ProtocolError as e:
                snap = service.snapshot()
                await send({
                    "id": e.request_id,
                    "ok": False,
                    "state": snap["state"],
                    "feed": snap["feed"],
                    "t": snap["t"],
                    "error": str(e),
                })
                if e.request_id is None:
                    break  # unframeable garbage, drop the connection
                continue
            reply = await service.submit(request)
            await send(reply)
            if request.cmd == "subscribe_events" and subscription is None and reply.get("ok"):
                subscription = service.subscribe()
                push_task = asyncio.get_running_loop().create_task(push_events(subscription))
            if request.cmd == "shutdown":
                break
    finally:
        if push_task is not None:
            push_task.cancel()
            with contextlib.suppress(asyncio.CancelledError):
                await push_task
        if subscription is not None:
            service.unsubscribe(subscription)
        try:
            writer.close()
            await writer.wait_closed()
        except (ConnectionResetError, BrokenPipeError):
            pass


async def serve_tcp(service: LauncherService, host: str = "127.0.0.1", port: int = None):
    port = port if port is not None else service.config.tcp_port
    server = await asyncio.start_server(
        lambda r, w: handle_connection(service, r, w),
        host,
        port,
        limit=MAX_FRAME_BYTES,
    )
    return server
