import logging
from contextlib import asynccontextmanager
from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from app.api.v1.endpoints import algebra, verify
from app.core.logging import configure_logging
from app.db.report_store import open_store, close_store

configure_logging()


@asynccontextmanager
async def lifespan(app: FastAPI):
    await open_store()
    logging.info("Report store opened.")
    yield
    await close_store()


app = FastAPI(
    title="q-Shuffle Workbench",
    description="Computations in the q-shuffle algebra and the basic module it carries.",
    version="0.1.0",
    lifespan=lifespan,
)

# CORS Middleware Configuration
origins = [
    "http://localhost",
    "http://localhost:3000",
    "http://127.0.0.1:3000",
]

app.add_middleware(
    CORSMiddleware,
    allow_origins=origins,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

app.include_router(algebra.router, prefix="/api/v1", tags=["algebra"])
app.include_router(verify.router, prefix="/api/v1", tags=["verify"])

@app.get("/")
def read_root():
    return {"message": "Welcome to the q-Shuffle Workbench API"}
