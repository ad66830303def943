"""Thin HTTP client for the verification service.

By default the client mounts the FastAPI application in-process through an
ASGI transport, so the CLI works with no running server; pass a base URL to
talk to a remote instance instead.
"""

from __future__ import annotations

import asyncio
from typing import Any

import httpx


class ServiceError(Exception):
    """An error response from the service, carrying its structured detail."""

    def __init__(self, status_code: int, error: str, message: str):
        self.status_code = status_code
        self.error = error
        self.message = message
        super().__init__(message)


class ServiceClient:
    """Synchronous facade over the service API."""

    def __init__(self, server: str | None = None):
        self._server = server

    def _make_client(self) -> httpx.AsyncClient:
        if self._server is None:
            from .service import app

            return httpx.AsyncClient(
                transport=httpx.ASGITransport(app=app),
                base_url="http://noetherjet.internal",
            )
        return httpx.AsyncClient(base_url=self._server, timeout=120.0)

    def _request(self, method: str, path: str, payload: dict | None = None) -> Any:
        async def go() -> Any:
            async with self._make_client() as client:
                response = await client.request(method, path, json=payload)
                if response.status_code >= 400:
                    detail = {}
                    try:
                        detail = response.json().get("detail", {})
                    except ValueError:
                        pass
                    if not isinstance(detail, dict):
                        detail = {"message": str(detail)}
                    raise ServiceError(
                        response.status_code,
                        detail.get("error", "http-error"),
                        detail.get("message", response.text),
                    )
                return response.json()

        return asyncio.run(go())

    def health(self) -> dict:
        return self._request("GET", "/health")

    def get_catalog(self) -> dict:
        return self._request("GET", "/catalog")

    def verify(self, **payload: Any) -> dict:
        return self._request("POST", "/verify", payload)

    def bracket_table(self, **payload: Any) -> dict:
        return self._request("POST", "/bracket-table", payload)

    def euler_lagrange(self, **payload: Any) -> dict:
        return self._request("POST", "/euler-lagrange", payload)

    def reduce(self, **payload: Any) -> dict:
        return self._request("POST", "/reduce", payload)

    def eval(self, **payload: Any) -> dict:
        return self._request("POST", "/eval", payload)
