"""
mbde 실행 스크립트 (`python main.py <subcommand> ...` == `mbde <subcommand> ...`)
"""
import sys

# .env 먼저 로드 (Settings가 MBDE_* 값을 읽기 전에)
from dotenv import load_dotenv
load_dotenv()

from app.cli.main import main

if __name__ == "__main__":
    sys.exit(main())
