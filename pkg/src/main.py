import argparse
import logging
import os
import sys

from dotenv import load_dotenv

from comandos.executar import COMANDOS, executar_comando
from fisica import VERSAO
from fisica.erros import ErroLaboratorio, ErroParametro
from processamento.carregar_config import carregar_config
from processamento.emitir_saidas import descrever_erro, gravar_erro, para_json

logger = logging.getLogger(__name__)

DIRETORIO_PADRAO = 'saida'


def criar_parser():
    parser = argparse.ArgumentParser(
        prog='fluxonium',
        description="Laboratório numérico do sensor de carga fluxonium",
    )
    parser.add_argument('comando', choices=list(COMANDOS), help="Pipeline a executar")
    parser.add_argument('--config', required=True, help="Arquivo JSON de configuração")
    parser.add_argument('--out', default=None,
                        help="Diretório de saída (padrão: $FLUXONIUM_SAIDA ou ./saida)")
    parser.add_argument('--seed', type=int, default=None, help="Semente (sobrescreve execucao.semente)")
    parser.add_argument('--set', dest='sobrescritas', action='append', default=[],
                        metavar='SECAO.CHAVE=VALOR', help="Sobrescreve um campo da configuração")
    parser.add_argument('--threads', type=int, default=1, help="Threads dos pipelines")
    parser.add_argument('--version', action='version', version=f"%(prog)s {VERSAO}")
    return parser


def configurar_logging():
    nivel = os.getenv('FLUXONIUM_LOG', 'INFO').upper()
    logging.basicConfig(
        level=getattr(logging, nivel, logging.INFO),
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
        stream=sys.stderr,
    )


def main(argv=None):
    """Função principal da CLI; retorna o código de saída"""
    load_dotenv()
    configurar_logging()
    args = criar_parser().parse_args(argv)
    diretorio = args.out or os.getenv('FLUXONIUM_SAIDA') or DIRETORIO_PADRAO

    try:
        if args.threads < 1:
            raise ErroParametro("--threads deve ser >= 1")
        config = carregar_config(args.config, args.sobrescritas, args.seed)
        executar_comando(args.comando, config, diretorio, args.threads)
        return 0
    except ErroLaboratorio as e:
        descricao = descrever_erro(e, e.codigo_saida)
    except (ArithmeticError, RuntimeError, ValueError) as e:
        logger.exception("Falha numérica não tratada")
        descricao = descrever_erro(e, 3)

    logger.error("❌ %s: %s", descricao['tipo'], descricao['mensagem'])
    if descricao['codigo'] != 4:
        gravar_erro(diretorio, descricao)
    print(para_json(descricao), file=sys.stderr)
    return descricao['codigo']


if __name__ == "__main__":
    sys.exit(main())
