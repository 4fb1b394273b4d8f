"""HTTP/WebSocket gateway for browsers.

Speaks the same JSON frames as the TCP port, tunneled over a WebSocket at
/ws.  Connected sockets also receive pushed frames: 5 Hz state broadcasts
(type "state") and launch/feed events (type "event").  GET /state returns
the latest snapshot; the operator console's static assets are served from
the configured directory at /.
"""

import asyncio
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import FileResponse, JSONResponse
from fastapi.staticfiles import StaticFiles

from .core import LauncherService
from .protocol import ProtocolError, parse_request


def _protocol_error_frame(service: LauncherService, e: ProtocolError) -> dict:
    snap = service.snapshot()
    return {
        "id": e.request_id,
        "ok": False,
        "state": snap["state"],
        "feed": snap["feed"],
        "t": snap["t"],
        "error": str(e),
    }


async def _ws_session(service: LauncherService, ws: WebSocket):
    """Pipeline: reader -> worker -> sender, with pushed frames merged in.

    Responses keep request order (the worker is serial) while broadcasts and
    events keep flowing even when a launch response is seconds away.
    """
    requests: "asyncio.Queue" = asyncio.Queue()
    outgoing: "asyncio.Queue" = asyncio.Queue()
    events = service.subscribe()

    async def reader():
        while True:
            text = await ws.receive_text()
            try:
                await requests.put(parse_request(text))
            except ProtocolError as e:
                await outgoing.put(_protocol_error_frame(service, e))

    async def worker():
        while True:
            request = await requests.get()
            await outgoing.put(await service.submit(request))

    async def pusher():
        while True:
            await outgoing.put(await events.get())

    async def sender():
        while True:
            await ws.send_json(await outgoing.get())

    tasks = [asyncio.ensure_future(f()) for f in (reader, worker, pusher, sender)]
    try:
        done, _ = await asyncio.wait(tasks, return_when=asyncio.FIRST_COMPLETED)
        for task in done:
            exc = task.exception()
            if exc and not isinstance(exc, (WebSocketDisconnect, RuntimeError)):
                raise exc
    finally:
        service.unsubscribe(events)
        for task in tasks:
            task.cancel()


def build_gateway(service: LauncherService, static_dir: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="launcher gateway", docs_url=None, redoc_url=None)

    @app.get("/state")
    async def get_state():
        return JSONResponse(service.snapshot())

    @app.websocket("/ws")
    async def websocket_endpoint(ws: WebSocket):
        await ws.accept()
        await _ws_session(service, ws)

    static = static_dir or service.config.static_dir
    if static and Path(static).is_dir():
        index = Path(static) / "index.html"
        if index.is_file():

            @app.get("/")
            async def root():
                return FileResponse(index)

        app.mount("/", StaticFiles(directory=static), name="console")
    else:

        @app.get("/")
        async def placeholder():
            return JSONResponse({"service": "launcher gateway", "console": "not installed"})

    return app
