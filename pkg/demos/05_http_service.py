"""
HTTP service session
====================

Boots the API on a local port and plays a short session over real HTTP:
register, log in, enroll, fail a quiz, retake it, and watch the unlock
land. In production the same app runs via `gamelearn serve` with
configuration taken from GAMELEARN_* environment variables.
"""

import threading
import time

import httpx
import uvicorn

from gamelearn.service import ServiceConfig, create_app

config = ServiceConfig(bind_host="127.0.0.1", bind_port=8077)
server = uvicorn.Server(uvicorn.Config(
    create_app(config=config), host=config.bind_host, port=config.bind_port,
    log_level="warning",
))
thread = threading.Thread(target=server.run, daemon=True)
thread.start()
while not server.started:
    time.sleep(0.05)

base = f"http://{config.bind_host}:{config.bind_port}"
client = httpx.Client(base_url=base)

print(client.post("/register", json={
    "user_name": "demo", "user_mail": "demo@example.edu", "credential": "pw",
}).json())
token = client.post("/login", json={"name_or_mail": "demo", "credential": "pw"}).json()["token"]
auth = {"Authorization": f"Bearer {token}"}

state = client.post("/courses/31285/enroll", json={
    "answers": {str(i): "B" for i in range(1, 15)},
}, headers=auth).json()
print(f"enrolled: core={state['core']}, progress {state['percent']}%")

for lesson in ("course_introduction", "mindset_and_perspectives", "reframing_conversations"):
    client.post(f"/courses/31285/lessons/{lesson}/complete", headers=auth)

fail = client.post("/quizzes/30381/attempts", json={"answers": ["x"]}, headers=auth).json()
print(f"first attempt: {fail['percentage']:.0f}% passed={fail['passed']}")
retake = client.post("/quizzes/30381/attempts", json={"answers": ["a"]}, headers=auth).json()
print(f"retake:        {retake['percentage']:.0f}% passed={retake['passed']} "
      f"unlocked={[u['node_id'] for u in retake['unlocked']]}")

board = client.get("/courses/31285/leaderboard", headers=auth).json()
print(f"leaderboard: {board['rows']}")

server.should_exit = True
thread.join(timeout=5)
