public final class BookFactory {

    private BookFactory() {
    }

    public static Book create() {
        return new Book();
    }
}
