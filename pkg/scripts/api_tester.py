import argparse
import json
import logging
from typing import Any, Dict, Optional

import httpx

logging.basicConfig(level=logging.INFO)


def call_endpoint(url: str, method: str, data: Optional[Dict[str, Any]] = None) -> None:
    try:
        if method.lower() == "get":
            response = httpx.get(url, timeout=60.0)
        elif method.lower() == "post":
            response = httpx.post(url, json=data, timeout=600.0)
        else:
            logging.error("Unsupported method: %s", method)
            return

        logging.info("Response from %s: %s", url, response.status_code)
        logging.info("Response body: %s", response.text)
    except httpx.HTTPError as e:
        logging.error("Error calling endpoint %s: %s", url, e)


def run_predefined_calls(base_url: str) -> None:
    logging.info("Running predefined calls...")
    call_endpoint(f"{base_url}/health", "get")
    call_endpoint(f"{base_url}/codes/rate?q=3&r=2&m=2", "get")
    # Overlap of the 4x2 example channel
    call_endpoint(
        f"{base_url}/channels/overlap",
        "post",
        {"channel": {"matrix": [["1", "0"], ["1/2", "1/2"], ["0", "1"], ["0", "1"]]}},
    )
    # Trace constraint on the mod-4 noise channel (hypotheses fail)
    call_endpoint(
        f"{base_url}/channels/symmetry",
        "post",
        {"channel": {"builtin": "additive", "noise": ["1/2", "0", "1/2", "0"]}},
    )
    call_endpoint(
        f"{base_url}/coset/scan",
        "post",
        {
            "code": {"q": 2, "r": 1, "m": 2},
            "channel": {"builtin": "bsc", "param": "1/10"},
            "t_grid": ["0", "1/2", "1"],
        },
    )
    call_endpoint(f"{base_url}/codes/puncture-check", "post", {"q": 2, "r": 1, "m": 3, "k": 1})
    # Invalid: q = 6 is not a prime power
    call_endpoint(f"{base_url}/codes/rate?q=6&r=1&m=2", "get")
    call_endpoint(
        f"{base_url}/verify",
        "post",
        {"q_list": [2], "instances": 5, "code_instances": 1, "seed": 0},
    )


def main() -> None:
    parser = argparse.ArgumentParser(description="grmlab API tester")
    parser.add_argument("url", type=str, nargs="?", help="API endpoint URL")
    parser.add_argument(
        "method", type=str, nargs="?", choices=["get", "post"], help="HTTP method to use"
    )
    parser.add_argument("--data", type=str, help="JSON data for POST requests")
    parser.add_argument("--run-all", action="store_true", help="Run all predefined calls")
    parser.add_argument(
        "--base-url",
        type=str,
        default="http://localhost:8000",
        help="Base URL for predefined calls",
    )

    args = parser.parse_args()

    if args.run_all:
        run_predefined_calls(args.base_url)
        return
    if not args.url or not args.method:
        parser.error("url and method are required unless --run-all is given")

    data = None
    if args.data:
        try:
            data = json.loads(args.data)
        except json.JSONDecodeError:
            logging.error("Invalid JSON data: %s", args.data)
            return

    call_endpoint(args.url, args.method, data)


if __name__ == "__main__":
    main()
