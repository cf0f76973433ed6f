"""Ponto de entrada: python app.py <comando> --config <arquivo.json> [opções]"""
import sys
from pathlib import Path

# src/ no caminho de importação, como no pytest.ini
BASE_DIR = Path(__file__).resolve().parent
sys.path.insert(0, str(BASE_DIR / 'src'))

try:
    from main import main
except ImportError as e:
    print(f"Erro ao importar: {e}")
    print(f"Python path: {sys.path}")
    sys.exit(1)

if __name__ == "__main__":
    sys.exit(main())
